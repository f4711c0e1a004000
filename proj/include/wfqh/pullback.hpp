// Principal-symbol transport along the interpolated flow conjugated by the
// semiclassical scaling, and the kappa-invariance check of the windowed
// quadratic form I(kappa) = Re <u_kappa, B(kappa) u_kappa>.
#pragma once

#include "wfqh/classical.hpp"
#include "wfqh/cranknicolson.hpp"
#include "wfqh/microlocal.hpp"

namespace wfqh {

// Samples are given in scaled frequency coordinates (t, x, h^2 tau, h xi); the
// value at a sample is the window symbol evaluated at the point flowed back to
// kappa = 0 under the scaling-conjugated interpolated flow.
Vec symbol_pullback(const PerturbationField& field, const ProbeWindow& a0_window, double kappa,
                    double h, const std::vector<ExtendedPoint>& samples, const FlowConfig& cfg);

struct EgorovConfig {
    Vec kappa_grid;  // ascending, starting at 0, within [0, 1]
    Vec h_list;
    double t0 = 0.2, t1 = 1.0;
    int n_t = 256;
    PropagatorConfig prop;
    FlowConfig flow;
};

struct EgorovResult {
    double h = 0.0;
    Vec kappa;
    Vec I_values;
    double drift = 0.0;  // max_kappa |I(kappa) - I(0)|
};

// For each h: rows u_kappa(t_k) = e^{-i kappa t_k H_os} U((1 - kappa) t_k) phi,
// B(kappa) the probe window recentered along the scaling-conjugated flow at
// lambda = 1/h, I(kappa) the windowed quadratic form over the (t, x) frame.
std::vector<EgorovResult> egorov_invariance(const WaveFunction& phi,
                                            const PerturbationField& field,
                                            const ProbeWindow& a0_window, const EgorovConfig& cfg,
                                            int threads = 1);

}  // namespace wfqh
