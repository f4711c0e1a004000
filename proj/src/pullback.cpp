#include "wfqh/pullback.hpp"

#include <cmath>

#include "wfqh/mehler.hpp"

namespace wfqh {

namespace {

double quad_form(const SpaceTimeField& u, const SpaceTimeField& bu) {
    double s = 0.0;
    for (int k = 0; k < u.n_t; ++k)
        for (int j = 0; j < u.grid.n; ++j)
            s += (std::conj(u.rows[k][j]) * bu.rows[k][j]).real();
    return s * u.dt() * u.grid.dx();
}

ProbeWindow transported_window(const PerturbationField& field, const ProbeWindow& a0,
                               double kappa, double h, const FlowConfig& flow) {
    ExtendedPoint tp = scaled_map_at_lambda(field, kappa, 1.0 / h, a0.center.t, a0.center.x,
                                            a0.center.tau_hat, a0.center.xi_hat, flow);
    double nrm = std::hypot(tp.tau, tp.xi[0]);
    if (nrm < 1e-12) throw numeric_error("egorov: transported frequency center degenerated");
    ProbeWindow out = a0;
    out.center.t = tp.t;
    out.center.x = tp.x;
    out.center.tau_hat = tp.tau / nrm;
    out.center.xi_hat = Vec{tp.xi[0] / nrm};
    return out;
}

}  // namespace

Vec symbol_pullback(const PerturbationField& field, const ProbeWindow& a0_window, double kappa,
                    double h, const std::vector<ExtendedPoint>& samples, const FlowConfig& cfg) {
    if (!(h > 0.0)) throw config_error("symbol_pullback: h must be positive");
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw config_error("symbol_pullback: kappa must lie in [0, 1]");
    double h2 = h * h;
    Vec out(samples.size(), 0.0);
    std::string failed;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const ExtendedPoint& p = samples[i];
        ExtendedPoint phys{p.t, p.x, p.tau / h2, Vec{p.xi[0] / h}};
        try {
            ExtendedPoint back = interpolated_flow_segment(field, kappa, 0.0, phys, cfg);
            out[i] = chi_window_value(a0_window, back.t, back.x[0]) *
                     psi_shell_value(a0_window, h2 * back.tau, h * back.xi[0]);
        } catch (const numeric_error&) {
            failed += failed.empty() ? std::to_string(i) : ", " + std::to_string(i);
        }
    }
    if (!failed.empty())
        throw numeric_error("symbol_pullback: flow failed at samples " + failed);
    return out;
}

std::vector<EgorovResult> egorov_invariance(const WaveFunction& phi,
                                            const PerturbationField& field,
                                            const ProbeWindow& a0_window, const EgorovConfig& cfg,
                                            int threads) {
    if (cfg.kappa_grid.empty() || cfg.kappa_grid.front() != 0.0)
        throw config_error("egorov: kappa grid must start at 0");
    for (std::size_t i = 0; i < cfg.kappa_grid.size(); ++i) {
        double k = cfg.kappa_grid[i];
        if (!(k >= 0.0 && k <= 1.0)) throw config_error("egorov: kappa grid must lie in [0, 1]");
        if (i > 0 && !(k > cfg.kappa_grid[i - 1]))
            throw config_error("egorov: kappa grid must be ascending");
    }
    if (cfg.h_list.empty()) throw config_error("egorov: empty h list");
    if (!(-M_PI < cfg.t0 && cfg.t1 < M_PI))
        throw config_error("egorov: quantum window must sit inside (-pi, pi)");

    std::size_t nk = cfg.kappa_grid.size(), nh = cfg.h_list.size();
    std::vector<Vec> I(nh, Vec(nk, 0.0));
    bool exact_route = field.is_trivial() && !cfg.prop.force_numeric;

    for (std::size_t ik = 0; ik < nk; ++ik) {
        double kappa = cfg.kappa_grid[ik];
        SpaceTimeField uk = make_field_frame(phi.grid, cfg.t0, cfg.t1, cfg.n_t);
        if (exact_route || kappa == 1.0) {
            parallel_for(cfg.n_t, threads, [&](std::size_t r) {
                uk.rows[r] = mehler_propagate(phi, uk.t(static_cast<int>(r)), cfg.prop).values;
            });
        } else {
            double shrink = 1.0 - kappa;
            SpaceTimeField mid = propagate_perturbed(phi, field, shrink * cfg.t0,
                                                     shrink * cfg.t1, cfg.n_t, cfg.prop);
            parallel_for(cfg.n_t, threads, [&](std::size_t r) {
                WaveFunction row{phi.grid, mid.rows[r]};
                uk.rows[r] =
                    mehler_propagate(row, kappa * uk.t(static_cast<int>(r)), cfg.prop).values;
            });
        }
        for (std::size_t ih = 0; ih < nh; ++ih) {
            ProbeWindow bw = transported_window(field, a0_window, kappa, cfg.h_list[ih], cfg.flow);
            SpaceTimeField filtered = apply_quasi_cutoff(uk, bw, cfg.h_list[ih], threads);
            I[ih][ik] = quad_form(uk, filtered);
        }
    }

    std::vector<EgorovResult> results(nh);
    for (std::size_t ih = 0; ih < nh; ++ih) {
        results[ih].h = cfg.h_list[ih];
        results[ih].kappa = cfg.kappa_grid;
        results[ih].I_values = I[ih];
        double drift = 0.0;
        for (double v : I[ih]) drift = std::max(drift, std::abs(v - I[ih][0]));
        results[ih].drift = drift;
    }
    return results;
}

}  // namespace wfqh
