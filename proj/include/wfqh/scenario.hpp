// Scenario files drive the command-line experiments. One TOML file describes
// one run: the perturbation family, the classical base point, the initial
// state, grids and windows, probe geometry, and the per-kind extras.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfqh/classical.hpp"
#include "wfqh/field.hpp"
#include "wfqh/grid.hpp"
#include "wfqh/mehler.hpp"
#include "wfqh/microlocal.hpp"
#include "wfqh/toml_lite.hpp"

namespace wfqh {

enum class ScenarioKind { classical, propagate, wf, egorov, theorem };

const char* kind_name(ScenarioKind k);
ScenarioKind kind_from_name(const std::string& name);

struct PhiSpec {
    enum class Type { coherent, singular } type = Type::coherent;
    double y = 0.0;        // packet center (both kinds)
    double eta = 0.0;      // coherent momentum parameter
    double h_scale = 1.0;  // coherent width scale
    double s0 = 0.75;      // singular exponent
    double width = 1.0;    // singular cutoff width
};

// Offsets applied to the base point for the probe sweep.
struct LatticePoint {
    double ds = 0.0, dy = 0.0, deta = 0.0;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::classical;
    std::uint64_t seed = 0;

    FamilySpec family;

    // classical base point (s, y, sigma, eta)
    double s = 0.0;
    Vec y{0.0};
    double sigma = 0.0;
    Vec eta{1.0};

    PhiSpec phi;

    int grid_n = 0;
    double grid_half_width = 0.0;
    double t0 = 0.0, t1 = 0.0;
    int n_t = 0;
    PropagatorConfig prop;

    Vec h_list;
    double w_t = 0.15, w_x = 0.6, freq_width = 0.3;
    IndicatorConfig thresholds;
    FlowConfig flow;

    std::vector<LatticePoint> lattice;

    // egorov extras
    Vec kappa_grid;
    double eg_t0 = 0.2, eg_t1 = 1.0;
    int eg_n_t = 256;

    // propagation validation extras
    double check_t = 1.0;
    Vec dt_halving;
    double dt_ref = 0.0;

    // classical suite extras
    Vec mourre_lambdas;
    double mourre_delta = 0.5;
    Vec kappa_list;
};

// Parse and validate; violated preconditions raise config_error.
Scenario scenario_from_toml(const TomlDoc& doc);
Scenario load_scenario(const std::string& path);
TomlDoc scenario_to_toml(const Scenario& scn);

PerturbationField scenario_field(const Scenario& scn);
SpatialGrid scenario_grid(const Scenario& scn);
WaveFunction build_phi(const Scenario& scn);

}  // namespace wfqh
