#include "wfqh/microlocal.hpp"

#include <cmath>

namespace wfqh {

namespace {

// Radial profile of psi: rise across [1/2, 0.65], plateau, fall across [1.8, 2].
constexpr double kShellLo = 0.5;
constexpr double kShellLoTop = 0.65;
constexpr double kShellHiStart = 1.8;
constexpr double kShellHi = 2.0;
constexpr double kNyquistMargin = 0.9;

void check_probe(const ProbeWindow& p) {
    if (p.center.x.size() != 1 || p.center.xi_hat.size() != 1)
        throw config_error("probe: quantum probes are d = 1");
    if (!(p.w_t > 0.0 && p.w_x > 0.0 && p.freq_width > 0.0))
        throw config_error("probe: widths must be positive");
    double r2 = p.center.tau_hat * p.center.tau_hat + p.center.xi_hat[0] * p.center.xi_hat[0];
    if (std::abs(r2 - 1.0) > 1e-9) throw config_error("probe: center direction must be unit");
    if (p.theta <= 0.0) throw config_error("probe: theta must be positive");
}

}  // namespace

std::string to_string(WfClass c) {
    switch (c) {
        case WfClass::in_wf: return "in_wf";
        case WfClass::not_in_wf: return "not_in_wf";
        default: return "inconclusive";
    }
}

double chi_window_value(const ProbeWindow& probe, double t, double x) {
    double ut = (t - probe.center.t) / probe.w_t;
    double ux = (x - probe.center.x[0]) / probe.w_x;
    if (std::abs(ut) >= 1.0 || std::abs(ux) >= 1.0) return 0.0;
    return bump(ut) * bump(ux);
}

double psi_shell_value(const ProbeWindow& probe, double tau_s, double xi_s) {
    double r = std::hypot(tau_s, xi_s);
    if (r <= kShellLo || r >= kShellHi) return 0.0;
    double rad = smooth_step((r - kShellLo) / (kShellLoTop - kShellLo)) *
                 smooth_step((kShellHi - r) / (kShellHi - kShellHiStart));
    double chord = std::hypot(tau_s / r - probe.center.tau_hat,
                              xi_s / r - probe.center.xi_hat[0]);
    double dir = smooth_step((probe.freq_width - chord) / (0.4 * probe.freq_width));
    return rad * dir;
}

SpaceTimeField apply_quasi_cutoff(const SpaceTimeField& u, const ProbeWindow& probe, double h,
                                  int threads) {
    check_probe(probe);
    if (!(h > 0.0)) throw config_error("apply_quasi_cutoff: h must be positive");
    double s = probe.center.t, y = probe.center.x[0];
    if (s - probe.w_t < u.t0 || s + probe.w_t > u.t1 || y - probe.w_x < -u.grid.half_width ||
        y + probe.w_x > u.grid.half_width)
        throw config_error("apply_quasi_cutoff: probe support exceeds the field window");

    Vec chi_t(u.n_t), chi_x(u.grid.n);
    for (int k = 0; k < u.n_t; ++k) {
        double ut = (u.t(k) - s) / probe.w_t;
        chi_t[k] = std::abs(ut) < 1.0 ? bump(ut) : 0.0;
    }
    for (int j = 0; j < u.grid.n; ++j) {
        double ux = (u.grid.x(j) - y) / probe.w_x;
        chi_x[j] = std::abs(ux) < 1.0 ? bump(ux) : 0.0;
    }

    SpaceTimeField w = make_field_frame(u.grid, u.t0, u.t1, u.n_t);
    parallel_for(u.n_t, threads, [&](std::size_t k) {
        for (int j = 0; j < u.grid.n; ++j) w.rows[k][j] = u.rows[k][j] * chi_t[k] * chi_x[j];
    });

    SpectralField g = field_ft2(w, threads);
    double ht = std::pow(h, probe.theta);
    parallel_for(g.n_t, threads, [&](std::size_t m) {
        double tau_s = ht * g.tau(static_cast<int>(m));
        for (int j = 0; j < g.n_x; ++j) g.rows[m][j] *= psi_shell_value(probe, tau_s, h * g.xi(j));
    });

    field_ift2_into(g, w, threads);
    parallel_for(u.n_t, threads, [&](std::size_t k) {
        for (int j = 0; j < u.grid.n; ++j) w.rows[k][j] *= chi_t[k] * chi_x[j];
    });
    return w;
}

IndicatorResult wf_indicator(const SpaceTimeField& u, const ProbeWindow& probe, const Vec& h_list,
                             const IndicatorConfig& cfg, int threads) {
    check_probe(probe);
    if (h_list.size() < 3) throw config_error("wf_indicator: need at least 3 h values");
    for (std::size_t i = 0; i + 1 < h_list.size(); ++i)
        if (!(h_list[i] > h_list[i + 1]))
            throw config_error("wf_indicator: h_list must be strictly decreasing");
    if (!(h_list.back() > 0.0)) throw config_error("wf_indicator: h values must be positive");

    // An h resolves when the spatial window admits the shell and the probed
    // shell (direction slack capped at the sphere) clears both Nyquist limits.
    double dx = u.grid.dx(), dt = u.dt();
    double slack = 0.5 * probe.freq_width;
    double tau_reach = kShellHi * std::min(1.0, std::abs(probe.center.tau_hat) + slack);
    double xi_reach = kShellHi * std::min(1.0, std::abs(probe.center.xi_hat[0]) + slack);
    Vec valid;
    for (double h : h_list) {
        bool ok = h >= 4.0 * dx / probe.w_x &&
                  tau_reach / std::pow(h, probe.theta) <= kNyquistMargin * M_PI / dt &&
                  xi_reach / h <= kNyquistMargin * M_PI / dx;
        if (ok) valid.push_back(h);
    }
    if (valid.size() < 3)
        throw config_error(str_printf("wf_indicator: only %zu of %zu h values are resolvable "
                                      "on this grid, need 3 for a slope fit",
                                      valid.size(), h_list.size()));

    IndicatorResult res;
    res.h_list = valid;
    res.thresholds = cfg;
    res.norms.resize(valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i)
        res.norms[i] = field_norm(apply_quasi_cutoff(u, probe, valid[i], threads));

    Vec lx(valid.size()), ly(valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i) {
        lx[i] = std::log(valid[i]);
        ly[i] = std::log(std::max(res.norms[i], cfg.floor));
    }
    res.fitted_alpha = fit_line(lx, ly).slope;

    double n_min = res.norms.back();
    if (n_min < cfg.floor)
        res.classification = WfClass::not_in_wf;
    else if (res.fitted_alpha >= cfg.alpha_high)
        res.classification = WfClass::not_in_wf;
    else if (res.fitted_alpha <= cfg.alpha_low)
        res.classification = WfClass::in_wf;
    else
        res.classification = WfClass::inconclusive;
    return res;
}

std::pair<ProbeWindow, ProbeWindow> characteristic_probe_pair(const PerturbationField& field,
                                                              double s, const Vec& y,
                                                              const Vec& eta,
                                                              const ProbeWindow& widths) {
    ProbeWindow on = widths;
    on.center = pi_map(field, s, y, eta);
    ProbeWindow off = on;
    off.center.tau_hat = -off.center.tau_hat;
    return {on, off};
}

}  // namespace wfqh
