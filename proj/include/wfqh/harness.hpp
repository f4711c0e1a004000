// Experiment drivers behind the CLI: each takes a validated scenario, runs
// the wired modules, and returns a report with pass/fail check lines plus
// the tables and figures to emit.
#pragma once

#include <string>
#include <vector>

#include "wfqh/cranknicolson.hpp"
#include "wfqh/pullback.hpp"
#include "wfqh/report.hpp"
#include "wfqh/scenario.hpp"

namespace wfqh {

struct ClassicalReport {
    ValidationReport decay;
    NontrapWitness nontrap;
    ScatteringDatum scattering;
    std::vector<MourreReport> mourre_runs;  // one per requested lambda
    std::vector<LimitMapResult> limits;     // one per kappa in kappa_list
    Vec kappa_list;
    JacobianResult jacobian;
    std::vector<CheckLine> checks;
    bool pass = false;
};

struct PropagationReport {
    double mismatch = 0.0;    // forced stepping vs closed form at check_t
    double norm_drift = 0.0;
    Vec dt_list, errors, ratios;
    std::vector<CheckLine> checks;
    bool pass = false;
};

struct WfReport {
    ProbeWindow probe;
    IndicatorResult result;
    std::vector<CheckLine> checks;
    bool pass = false;
};

struct EgorovReport {
    std::vector<EgorovResult> runs;  // one per h
    Vec ratios;                      // drift(h_{i+1}) / drift(h_i)
    std::vector<CheckLine> checks;
    bool pass = false;
};

struct ProbeVerdict {
    int id = 0;
    double s = 0.0, y = 0.0, eta = 0.0;
    double x_plus = 0.0, xi_plus = 0.0, sigma_limit = 0.0;
    IndicatorResult u_side, os_side;
    bool inconclusive = false;
    bool agree = false;  // meaningful only when not inconclusive
};

struct TheoremReport {
    std::vector<ProbeVerdict> probes;
    int n_agree = 0, n_decided = 0, n_inconclusive = 0;
    double agreement_rate = 0.0;       // over decided probes
    double inconclusive_fraction = 0.0;
    std::vector<CheckLine> checks;
    bool pass = false;
};

ClassicalReport run_classical_suite(const Scenario& scn, int threads = 1);
PropagationReport run_propagation_check(const Scenario& scn, int threads = 1);
WfReport run_wf(const Scenario& scn, int threads = 1);
EgorovReport run_egorov(const Scenario& scn, int threads = 1);
TheoremReport run_theorem_experiment(const Scenario& scn, int threads = 1);

void emit_report(const Scenario& scn, const ClassicalReport& r, const std::string& out_dir);
void emit_report(const Scenario& scn, const PropagationReport& r, const std::string& out_dir);
void emit_report(const Scenario& scn, const WfReport& r, const std::string& out_dir);
void emit_report(const Scenario& scn, const EgorovReport& r, const std::string& out_dir);
void emit_report(const Scenario& scn, const TheoremReport& r, const std::string& out_dir);

// Rebuild the figures of an existing output directory from its tables.
void regenerate_figures(const std::string& out_dir);

}  // namespace wfqh
