// Wave-front estimation on sampled space-time fields: windowed anisotropic
// frequency cutoffs chi(t,x) psi(h^theta D_t, h D_x) chi(t,x), decay-exponent
// fits of the cutoff norms N(h), and the on/off characteristic probe pairs.
#pragma once

#include <string>
#include <vector>

#include "wfqh/classical.hpp"
#include "wfqh/fft.hpp"
#include "wfqh/grid.hpp"

namespace wfqh {

// Localization window on R^{1+1} x S^1: bump factors chi of half-widths
// (w_t, w_x) about (t, x) = (center.t, center.x[0]), and a frequency bump psi
// on the scaled shell 1/2 <= |(h^theta tau, h xi)| <= 2 within chordal
// distance freq_width of (tau_hat, xi_hat).
struct ProbeWindow {
    DirectionPoint center;
    double w_t = 0.15;
    double w_x = 0.6;
    double freq_width = 0.3;
    double theta = 2.0;
};

enum class WfClass { in_wf, not_in_wf, inconclusive };
std::string to_string(WfClass c);

struct IndicatorConfig {
    double alpha_low = 1.0;   // fitted slope at or below which the norm counts as stagnant
    double alpha_high = 3.0;  // slope at or above which the decay counts as rapid
    double floor = 1e-9;      // norms at h_min below this count as fully decayed
};

struct IndicatorResult {
    Vec h_list;  // resolvable entries only, decreasing
    Vec norms;
    double fitted_alpha = 0.0;
    WfClass classification = WfClass::inconclusive;
    IndicatorConfig thresholds;
};

double chi_window_value(const ProbeWindow& probe, double t, double x);
// psi evaluated at already-scaled frequencies (h^theta tau, h xi).
double psi_shell_value(const ProbeWindow& probe, double tau_s, double xi_s);

// chi * inverse-transform(psi * transform(chi * u)). Throws when the chi
// support sticks out of the field window.
SpaceTimeField apply_quasi_cutoff(const SpaceTimeField& u, const ProbeWindow& probe, double h,
                                  int threads = 1);

// N(h) over the resolvable part of h_list, the log-log slope fit, and the
// classification. An h resolves when the window admits the shell (h >= 4 dx /
// w_x) and the probed shell stays under both grid frequency limits.
IndicatorResult wf_indicator(const SpaceTimeField& u, const ProbeWindow& probe, const Vec& h_list,
                             const IndicatorConfig& cfg = {}, int threads = 1);

// On-set probe at the compactified forward characteristic point over (s, y,
// eta); off-set probe with the tau component negated. Shared widths.
std::pair<ProbeWindow, ProbeWindow> characteristic_probe_pair(const PerturbationField& field,
                                                              double s, const Vec& y,
                                                              const Vec& eta,
                                                              const ProbeWindow& widths = {});

}  // namespace wfqh
