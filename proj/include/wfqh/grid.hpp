// Spatial grid, wave functions, space-time fields, and the initial-data
// constructors used by the quantum experiments (d = 1 throughout).
#pragma once

#include <string>
#include <vector>

#include "wfqh/numerics.hpp"

namespace wfqh {

// Uniform grid on [-L, L) with N = 2^k nodes, x_j = -L + j*dx. The right
// endpoint is excluded so the node set matches the discrete Fourier lattice.
struct SpatialGrid {
    int n = 0;
    double half_width = 0.0;

    double dx() const { return 2.0 * half_width / n; }
    double x(int j) const { return -half_width + j * dx(); }
    bool operator==(const SpatialGrid&) const = default;
};

SpatialGrid make_grid(int n, double half_width);  // throws unless n = 2^k >= 8

struct WaveFunction {
    SpatialGrid grid;
    CVec values;
};

double wf_norm(const WaveFunction& f);                        // sqrt(dx * sum |f|^2)
Cplx wf_inner(const WaveFunction& f, const WaveFunction& g);  // dx * sum conj(f) g
double wf_distance(const WaveFunction& f, const WaveFunction& g);

// Rows sample times t_k = t0 + k*(t1 - t0)/n_t, k = 0..n_t-1 (right endpoint
// excluded, matching the time-frequency lattice of the 2-D transform).
struct SpaceTimeField {
    SpatialGrid grid;
    double t0 = 0.0, t1 = 0.0;
    int n_t = 0;
    std::vector<CVec> rows;

    double dt() const { return (t1 - t0) / n_t; }
    double t(int k) const { return t0 + k * dt(); }
};

SpaceTimeField make_field_frame(const SpatialGrid& grid, double t0, double t1, int n_t);

double field_norm(const SpaceTimeField& u);  // L^2(dt dx) over the window
double field_distance(const SpaceTimeField& u, const SpaceTimeField& v);

// Relative spread of the row norms; 0 for exactly unitary row families.
double row_norm_spread(const SpaceTimeField& u);

// Interleaved (re, im) doubles, row-major, little-endian, with a JSON sidecar
// at path + ".json" carrying the frame and an optional free-form description.
void save_field(const SpaceTimeField& u, const std::string& path,
                const std::string& description = "");
SpaceTimeField load_field(const std::string& path);

// (pi h)^{-1/4} exp(-(x-y)^2 / (2h)) exp(i eta x / h), renormalized on the
// grid. Throws when the Gaussian tail at the boundary exceeds 1e-12.
WaveFunction coherent_state(const SpatialGrid& grid, double y, double eta, double h_scale);

// chi((x-y0)/w) |x-y0|^{s0} with a smooth bump chi, normalized. s0 in (0.5, 1).
WaveFunction singular_state(const SpatialGrid& grid, double y0, double s0, double cutoff_width);

}  // namespace wfqh
