#include "wfqh/cranknicolson.hpp"

#include <algorithm>
#include <cmath>

namespace wfqh {

namespace {

struct CnWorkspace {
    Vec a_half, pot, xbuf{0.0};
    CVec diag, off, rhs, cp;
};

// One Cayley step u -> (1 + i h/2 H)^{-1} (1 - i h/2 H) u with H assembled at
// the half-step time. Kinetic part in divergence form with midpoint fluxes;
// walls pinned to zero, interior solved by the Thomas recursion.
void cn_step(CVec& u, const PerturbationField& field, const SpatialGrid& g, double t_from,
             double h, CnWorkspace& w) {
    int n = g.n;
    double dx = g.dx();
    double inv2 = 1.0 / (2.0 * dx * dx);
    double t_mid = t_from + h / 2.0;

    w.a_half.resize(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
        w.xbuf[0] = g.x(j) + dx / 2.0;
        w.a_half[j] = field.a_scalar(t_mid, w.xbuf);
    }
    w.pot.resize(n);
    for (int j = 0; j < n; ++j) {
        w.xbuf[0] = g.x(j);
        w.pot[j] = g.x(j) * g.x(j) / 2.0 + field.eval_V(t_mid, w.xbuf);
    }

    Cplx z{0.0, h / 2.0};
    w.diag.assign(n, Cplx{0.0, 0.0});
    w.off.assign(n, Cplx{0.0, 0.0});
    w.rhs.assign(n, Cplx{0.0, 0.0});
    for (int j = 1; j + 1 < n; ++j) {
        double hd = (w.a_half[j - 1] + w.a_half[j]) * inv2 + w.pot[j];
        Cplx hu = hd * u[j] - w.a_half[j - 1] * inv2 * u[j - 1] - w.a_half[j] * inv2 * u[j + 1];
        w.rhs[j] = u[j] - z * hu;
        w.diag[j] = 1.0 + z * hd;
        w.off[j] = z * (-w.a_half[j] * inv2);  // couples j and j+1
    }

    w.cp.assign(n, Cplx{0.0, 0.0});
    Cplx piv = w.diag[1];
    u[1] = w.rhs[1] / piv;
    for (int j = 2; j + 1 < n; ++j) {
        w.cp[j] = w.off[j - 1] / piv;
        piv = w.diag[j] - w.off[j - 1] * w.cp[j];
        if (std::abs(piv) < 1e-300) throw numeric_error("cn_step: tridiagonal pivot collapse");
        u[j] = (w.rhs[j] - w.off[j - 1] * u[j - 1]) / piv;
    }
    for (int j = n - 3; j >= 1; --j) u[j] -= w.cp[j + 1] * u[j + 1];
    u[0] = u[n - 1] = Cplx{0.0, 0.0};
}

void track_boundary(const CVec& u, double dx, CnDiagnostics* diag) {
    if (!diag) return;
    double edge = dx * std::max(std::norm(u[1]), std::norm(u[u.size() - 2]));
    diag->boundary_mass = std::max(diag->boundary_mass, edge);
    if (diag->boundary_mass > 1e-8) diag->boundary_ok = false;
}

void march(CVec& u, const PerturbationField& field, const SpatialGrid& g, double t_from,
           double t_to, const PropagatorConfig& cfg, CnWorkspace& w, CnDiagnostics* diag) {
    double gap = t_to - t_from;
    if (gap == 0.0) return;
    int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(gap) / cfg.dt)));
    double h = gap / nsub;
    for (int i = 0; i < nsub; ++i) {
        cn_step(u, field, g, t_from + i * h, h, w);
        track_boundary(u, g.dx(), diag);
    }
}

void check_quantum_field(const PerturbationField& field, const PropagatorConfig& cfg) {
    if (field.dim() != 1) throw config_error("perturbed propagation supports d = 1 only");
    if (!(cfg.dt > 0.0)) throw config_error("propagation: dt must be positive");
}

double rel_norm_gap(const CVec& u, double dx, double ref) {
    double s = 0.0;
    for (const auto& v : u) s += std::norm(v);
    return std::abs(std::sqrt(s * dx) - ref) / ref;
}

}  // namespace

SpaceTimeField propagate_perturbed(const WaveFunction& phi, const PerturbationField& field,
                                   double t0, double t1, int n_t, const PropagatorConfig& cfg,
                                   CnDiagnostics* diag) {
    check_quantum_field(field, cfg);
    SpaceTimeField out = make_field_frame(phi.grid, t0, t1, n_t);
    double norm0 = wf_norm(phi);
    if (norm0 < 1e-300) throw numeric_error("propagate_perturbed: zero initial state");
    CnWorkspace w;

    // Data sits at time 0; march each side of it separately, nearest row first.
    std::vector<int> fwd, bwd;
    for (int k = 0; k < n_t; ++k) (out.t(k) >= 0.0 ? fwd : bwd).push_back(k);
    std::sort(bwd.begin(), bwd.end(), [&](int a, int b) { return out.t(a) > out.t(b); });

    for (int pass = 0; pass < 2; ++pass) {
        const std::vector<int>& order = pass == 0 ? fwd : bwd;
        if (order.empty()) continue;
        CVec u = phi.values;
        u.front() = u.back() = Cplx{0.0, 0.0};
        double cur = 0.0;
        for (int k : order) {
            march(u, field, phi.grid, cur, out.t(k), cfg, w, diag);
            cur = out.t(k);
            out.rows[k] = u;
            if (diag)
                diag->norm_drift =
                    std::max(diag->norm_drift, rel_norm_gap(u, phi.grid.dx(), norm0));
        }
    }
    return out;
}

WaveFunction cn_evolve_state(const WaveFunction& phi, const PerturbationField& field, double t_to,
                             const PropagatorConfig& cfg, CnDiagnostics* diag) {
    check_quantum_field(field, cfg);
    WaveFunction out{phi.grid, phi.values};
    out.values.front() = out.values.back() = Cplx{0.0, 0.0};
    CnWorkspace w;
    march(out.values, field, phi.grid, 0.0, t_to, cfg, w, diag);
    return out;
}

WaveFunction interpolated_state(const WaveFunction& phi, const PerturbationField& field,
                                double kappa, double t, const PropagatorConfig& cfg) {
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw config_error("interpolated_state: kappa must lie in [0, 1]");
    if (field.is_trivial() && !cfg.force_numeric) return mehler_propagate(phi, t, cfg);
    WaveFunction mid = cn_evolve_state(phi, field, (1.0 - kappa) * t, cfg);
    return mehler_propagate(mid, kappa * t, cfg);
}

}  // namespace wfqh
