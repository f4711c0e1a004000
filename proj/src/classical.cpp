#include "wfqh/classical.hpp"

#include <algorithm>
#include <cmath>

#include "wfqh/ode.hpp"
#include "wfqh/richardson.hpp"

namespace wfqh {

namespace {

Vec integrate(const FlowConfig& cfg, const OdeRhs& rhs, double t0, const Vec& y0, double t1) {
    if (cfg.integrator == Integrator::rk4) {
        const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(t1 - t0) / cfg.dt)));
        return integrate_rk4(rhs, t0, y0, t1, n);
    }
    OdeOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    opt.initial_step = std::min(1e-3, std::abs(t1 - t0));
    return integrate_rk45(rhs, t0, y0, t1, opt);
}

// Right-hand side of the frozen-time kinetic flow at frozen time s:
//   dx/dt = a(s,x) xi,   dxi/dt = -1/2 (grad_x a)(s,x) xi.xi
OdeRhs frozen_rhs(const PerturbationField& field, double s, int d) {
    return [&field, s, d](double, const Vec& u, Vec& du) {
        du.resize(2 * d);
        Vec x(u.begin(), u.begin() + d), xi(u.begin() + d, u.end());
        const double al = field.a_scalar(s, x);
        Vec g;
        field.da_space_quad(s, x, xi, g);
        for (int i = 0; i < d; ++i) {
            du[i] = al * xi[i];
            du[d + i] = -0.5 * g[i];
        }
    };
}

// Right-hand side of the reduced (z, gamma) system at flow parameter kappa:
//   dz/dkappa     = -s a((1-kappa)s, z) gamma
//   dgamma/dkappa = s/2 (grad_z a)((1-kappa)s, z) gamma.gamma
//                   + s (grad V)((1-kappa)s, z) + s z
// The scaled system is the same with the potential and restoring terms carrying
// lambda^{-2} and the frozen time (1 - kappa/lambda)s; lambda <= 0 selects the
// plain reduced variant.
OdeRhs reduced_rhs(const PerturbationField& field, double s, int d, double lambda) {
    return [&field, s, d, lambda](double kappa, const Vec& u, Vec& du) {
        du.resize(2 * d);
        Vec z(u.begin(), u.begin() + d), g(u.begin() + d, u.end());
        const double T = (lambda > 0.0) ? (1.0 - kappa / lambda) * s : (1.0 - kappa) * s;
        const double soft = (lambda > 0.0) ? 1.0 / (lambda * lambda) : 1.0;
        const double al = field.a_scalar(T, z);
        Vec dq;
        field.da_space_quad(T, z, g, dq);
        const Vec gv = field.eval_gradV(T, z);
        for (int i = 0; i < d; ++i) {
            du[i] = -s * al * g[i];
            du[d + i] = s * (0.5 * dq[i] + soft * (gv[i] + z[i]));
        }
    };
}

PhasePoint split_phase(const Vec& u, int d) {
    PhasePoint p;
    p.x.assign(u.begin(), u.begin() + d);
    p.xi.assign(u.begin() + d, u.end());
    return p;
}

Vec join_phase(const Vec& a, const Vec& b) {
    Vec u(a);
    u.insert(u.end(), b.begin(), b.end());
    return u;
}

// Conserved quantity of the interpolated flow, evaluated from reduced variables
// at parameter kappa. tau(kappa) = rho - (1-kappa) E - kappa/2 |gamma|^2 - 1/2 |z|^2
// with E the frozen energy-plus-potential at the transported point.
double rho_invariant(const PerturbationField& field, double s, double kappa, double tau,
                     const Vec& z, const Vec& gamma) {
    const double T = (1.0 - kappa) * s;
    const double E = 0.5 * field.a_quad(T, z, gamma) + field.eval_V(T, z);
    return tau + (1.0 - kappa) * E + 0.5 * kappa * sqnorm(gamma) + 0.5 * sqnorm(z);
}

double tau_from_rho(const PerturbationField& field, double s, double kappa, double rho,
                    const Vec& z, const Vec& gamma) {
    const double T = (1.0 - kappa) * s;
    const double E = 0.5 * field.a_quad(T, z, gamma) + field.eval_V(T, z);
    return rho - (1.0 - kappa) * E - 0.5 * kappa * sqnorm(gamma) - 0.5 * sqnorm(z);
}

void rotate_to_phase(double ang, const Vec& z, const Vec& g, Vec& x, Vec& xi) {
    const double c = std::cos(ang), sn = std::sin(ang);
    const std::size_t d = z.size();
    x.resize(d);
    xi.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        x[i] = c * z[i] + sn * g[i];
        xi[i] = -sn * z[i] + c * g[i];
    }
}

void rotate_from_phase(double ang, const Vec& x, const Vec& xi, Vec& z, Vec& g) {
    const double c = std::cos(ang), sn = std::sin(ang);
    const std::size_t d = x.size();
    z.resize(d);
    g.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        z[i] = c * x[i] - sn * xi[i];
        g[i] = sn * x[i] + c * xi[i];
    }
}

double det_small(std::vector<Vec> m) {
    const std::size_t n = m.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-300) return 0.0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t cc = col; cc < n; ++cc) m[r][cc] -= f * m[col][cc];
        }
    }
    return det;
}

}  // namespace

PhasePoint hamilton_flow(const PerturbationField& field, double s, const Vec& y, const Vec& eta,
                         double t_target, const FlowConfig& cfg) {
    const int d = field.dim();
    if (static_cast<int>(y.size()) != d || static_cast<int>(eta.size()) != d)
        throw config_error("hamilton_flow: dimension mismatch");
    if (t_target == s) return PhasePoint{y, eta};
    const Vec u = integrate(cfg, frozen_rhs(field, s, d), s, join_phase(y, eta), t_target);
    return split_phase(u, d);
}

double frozen_energy(const PerturbationField& field, double s, const PhasePoint& p) {
    return 0.5 * field.a_quad(s, p.x, p.xi);
}

NontrapWitness is_nontrapping(const PerturbationField& field, double s, const Vec& y,
                              const Vec& eta, const FlowConfig& cfg, double slope_threshold) {
    NontrapWitness w;
    w.lambdas = cfg.lambda_schedule;
    for (double lam : cfg.lambda_schedule) {
        Vec sc(eta);
        for (double& v : sc) v *= lam;
        const PhasePoint p = hamilton_flow(field, s, y, sc, 0.0, cfg);
        w.radii.push_back(norm2(p.x));
    }
    const std::size_t n = w.radii.size();
    if (n < 3) throw config_error("is_nontrapping: schedule needs >= 3 entries");
    Vec lx, ly;
    bool increasing = true;
    for (std::size_t k = n - 3; k < n; ++k) {
        if (w.radii[k] <= 0.0) {
            w.ok = false;
            return w;
        }
        lx.push_back(std::log(w.lambdas[k]));
        ly.push_back(std::log(w.radii[k]));
        if (k > n - 3 && w.radii[k] <= w.radii[k - 1]) increasing = false;
    }
    w.slope = fit_line(lx, ly).slope;
    w.ok = increasing && w.slope >= slope_threshold;
    return w;
}

ScatteringDatum scattering_data(const PerturbationField& field, double s, const Vec& y,
                                double sigma, const Vec& eta, const FlowConfig& cfg) {
    const NontrapWitness nt = is_nontrapping(field, s, y, eta, cfg);
    if (!nt.ok)
        throw numeric_error(str_printf(
            "scattering_data: data not certified non-trapping (log-log slope %.3f)", nt.slope));
    const int d = field.dim();
    ScatteringDatum out;
    out.lambda_schedule = cfg.lambda_schedule;
    const std::size_t n = cfg.lambda_schedule.size();
    out.per_lambda.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = cfg.lambda_schedule[k];
        Vec sc(eta);
        for (double& v : sc) v *= lam;
        const PhasePoint p = hamilton_flow(field, s, y, sc, 0.0, cfg);
        PhasePoint b;
        b.x.resize(d);
        b.xi.resize(d);
        for (int i = 0; i < d; ++i) {
            b.x[i] = p.x[i] + s * p.xi[i];
            b.xi[i] = p.xi[i] / lam;
        }
        out.per_lambda[k] = b;
    }
    out.x_plus.resize(d);
    out.xi_plus.resize(d);
    const double eps = field.epsilon();
    for (int i = 0; i < d; ++i) {
        Vec vx(n), vxi(n);
        for (std::size_t k = 0; k < n; ++k) {
            vx[k] = out.per_lambda[k].x[i];
            vxi[k] = out.per_lambda[k].xi[i];
        }
        out.x_plus[i] = extrapolate_powerlaw(cfg.lambda_schedule, vx, eps).limit;
        out.xi_plus[i] = extrapolate_powerlaw(cfg.lambda_schedule, vxi, eps).limit;
    }
    out.residuals.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double dx = out.per_lambda[k].x[i] - out.x_plus[i];
            const double dxi = out.per_lambda[k].xi[i] - out.xi_plus[i];
            r2 += dx * dx + dxi * dxi;
        }
        out.residuals[k] = std::sqrt(r2);
    }
    // Monotone tail: the three largest lambda must not show growth beyond slack.
    for (std::size_t k = n - 2; k < n; ++k)
        if (out.residuals[k] > out.residuals[k - 1] * (1.0 + 1e-6) + 1e-12)
            throw numeric_error(
                str_printf("scattering_data: residuals grow along the tail (%.3e -> %.3e)",
                           out.residuals[k - 1], out.residuals[k]));
    out.sigma_limit = sigma + 0.5 * field.a_quad(s, y, eta) - 0.5 * sqnorm(out.xi_plus);
    return out;
}

double normalization_mu(const PerturbationField& field, double t, const Vec& x, const Vec& xi) {
    const double B = sqnorm(xi);
    if (B == 0.0) throw config_error("normalization_mu: xi must be nonzero");
    const double aq = field.a_quad(t, x, xi);
    const double mu2 = 2.0 / (std::sqrt(B * B + aq * aq) + B);
    return std::sqrt(mu2);
}

DirectionPoint pi_map(const PerturbationField& field, double t, const Vec& x, const Vec& xi) {
    const double mu = normalization_mu(field, t, x, xi);
    const double aq = field.a_quad(t, x, xi);
    DirectionPoint p;
    p.t = t;
    p.x = x;
    p.tau_hat = -0.5 * mu * mu * aq;
    p.xi_hat.resize(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) p.xi_hat[i] = mu * xi[i];
    return p;
}

DirectionPoint pi_os_map(double t, const Vec& x, const Vec& xi) {
    const double B = sqnorm(xi);
    if (B == 0.0) throw config_error("pi_os_map: xi must be nonzero");
    // a = identity: mu^2 |xi|^2 = 2/(sqrt(2)+1) = 2(sqrt(2)-1)
    const double s2 = std::sqrt(2.0);
    DirectionPoint p;
    p.t = t;
    p.x = x;
    p.tau_hat = -(s2 - 1.0);
    const double scale = std::sqrt(2.0 * (s2 - 1.0) / B);
    p.xi_hat.resize(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) p.xi_hat[i] = scale * xi[i];
    return p;
}

PhasePoint reduced_flow(const PerturbationField& field, double s, const Vec& y, const Vec& gamma0,
                        double kappa_target, const FlowConfig& cfg) {
    const int d = field.dim();
    if (kappa_target == 0.0) return PhasePoint{y, gamma0};
    const Vec u =
        integrate(cfg, reduced_rhs(field, s, d, -1.0), 0.0, join_phase(y, gamma0), kappa_target);
    return split_phase(u, d);
}

PhasePoint scaled_flow(const PerturbationField& field, double lambda, double s, const Vec& y,
                       const Vec& eta, double kappa_target, const FlowConfig& cfg) {
    if (lambda < 1.0) throw config_error("scaled_flow: lambda must be >= 1");
    if (kappa_target < 0.0 || kappa_target > lambda)
        throw config_error("scaled_flow: kappa_target outside [0, lambda]");
    const int d = field.dim();
    if (kappa_target == 0.0) return PhasePoint{y, eta};
    const Vec u =
        integrate(cfg, reduced_rhs(field, s, d, lambda), 0.0, join_phase(y, eta), kappa_target);
    return split_phase(u, d);
}

PhasePoint hat_transform(double lambda, double s, double kappa, const PhasePoint& p) {
    const double ang = s * kappa / lambda;
    const double c = std::cos(ang), sn = std::sin(ang);
    const std::size_t d = p.x.size();
    PhasePoint out;
    out.x.resize(d);
    out.xi.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out.x[i] = c * p.x[i] + lambda * sn * p.xi[i];
        out.xi[i] = -sn / lambda * p.x[i] + c * p.xi[i];
    }
    return out;
}

PhasePoint hat_transform_inverse(double lambda, double s, double kappa, const PhasePoint& p) {
    const double ang = s * kappa / lambda;
    const double c = std::cos(ang), sn = std::sin(ang);
    const std::size_t d = p.x.size();
    PhasePoint out;
    out.x.resize(d);
    out.xi.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out.x[i] = c * p.x[i] - lambda * sn * p.xi[i];
        out.xi[i] = sn / lambda * p.x[i] + c * p.xi[i];
    }
    return out;
}

MourreReport mourre_diagnostics(const PerturbationField& field, double lambda, double s,
                                const Vec& y, const Vec& eta, double delta,
                                const FlowConfig& cfg) {
    if (delta <= 0.0 || delta >= 1.0) throw config_error("mourre_diagnostics: delta in (0,1)");
    if (lambda < 10.0) throw config_error("mourre_diagnostics: lambda below supported floor");
    const int d = field.dim();
    const int n = std::max(17, cfg.kappa_points);
    const double kmax = delta * lambda;
    MourreReport rep;
    rep.lambda = lambda;
    rep.delta = delta;
    rep.kappa.resize(n);
    rep.energy.resize(n);
    rep.radius.resize(n);

    const OdeRhs rhs = reduced_rhs(field, s, d, lambda);
    Vec u = join_phase(y, eta);
    for (int k = 0; k < n; ++k) {
        const double kap = kmax * k / static_cast<double>(n - 1);
        if (k > 0) {
            const double prev = kmax * (k - 1) / static_cast<double>(n - 1);
            u = integrate(cfg, rhs, prev, u, kap);
        }
        const PhasePoint p = split_phase(u, d);
        const double T = (1.0 - kap / lambda) * s;
        rep.kappa[k] = kap;
        rep.energy[k] = field.a_quad(T, p.x, p.xi) + sqnorm(p.x) / (lambda * lambda);
        rep.radius[k] = norm2(p.x);
        if (k == n - 1) rep.hat_end = hat_transform(lambda, s, kap, p);
    }
    rep.c1 = *std::min_element(rep.energy.begin(), rep.energy.end());
    rep.c2 = *std::max_element(rep.energy.begin(), rep.energy.end());

    // Second central difference of radius^2 on the uniform grid.
    const double dk = kmax / static_cast<double>(n - 1);
    rep.convexity.assign(n, 0.0);
    for (int k = 1; k + 1 < n; ++k) {
        const double a0 = rep.radius[k - 1] * rep.radius[k - 1];
        const double a1 = rep.radius[k] * rep.radius[k];
        const double a2 = rep.radius[k + 1] * rep.radius[k + 1];
        rep.convexity[k] = (a2 - 2.0 * a1 + a0) / (dk * dk);
    }
    Vec tail(rep.convexity.begin() + n / 2, rep.convexity.end() - 1);
    std::sort(tail.begin(), tail.end());
    const double tail_median = tail.empty() ? 0.0 : tail[tail.size() / 2];

    int k0 = n - 2;
    for (int k = 1; k + 1 < n; ++k) {
        bool all_ok = true;
        for (int j = k; j + 1 < n; ++j)
            if (rep.convexity[j] < 0.5 * tail_median) {
                all_ok = false;
                break;
            }
        if (all_ok) {
            k0 = k;
            break;
        }
    }
    rep.kappa0 = rep.kappa[k0];
    rep.convexity_ok = true;
    for (int k = std::max(1, k0); k + 1 < n; ++k)
        if (rep.convexity[k] < 0.0) rep.convexity_ok = false;

    Vec fx(rep.kappa.begin() + k0, rep.kappa.end());
    Vec fy(rep.radius.begin() + k0, rep.radius.end());
    const LineFit lf = fit_line(fx, fy);
    rep.tail_slope = lf.slope;
    rep.tail_icept = lf.icept;
    return rep;
}

double l_symbol(const PerturbationField& field, double kappa, const ExtendedPoint& p) {
    const double t = p.t;
    const double ang = -kappa * t;
    const double c = std::cos(ang), sn = std::sin(ang);
    const std::size_t d = p.x.size();
    Vec w(d), g(d);
    for (std::size_t i = 0; i < d; ++i) {
        w[i] = c * p.x[i] + sn * p.xi[i];
        g[i] = -sn * p.x[i] + c * p.xi[i];
    }
    const double T = (1.0 - kappa) * t;
    const double Agg = (field.a_scalar(T, w) - 1.0) * sqnorm(g);
    return -0.5 * t * Agg - t * field.eval_V(T, w);
}

ExtendedPoint interpolated_flow_segment(const PerturbationField& field, double kappa_from,
                                        double kappa_to, const ExtendedPoint& p,
                                        const FlowConfig& cfg) {
    const int d = field.dim();
    const double s = p.t;
    Vec z, g;
    rotate_from_phase(kappa_from * s, p.x, p.xi, z, g);
    const double rho = rho_invariant(field, s, kappa_from, p.tau, z, g);
    Vec u = join_phase(z, g);
    if (kappa_to != kappa_from)
        u = integrate(cfg, reduced_rhs(field, s, d, -1.0), kappa_from, u, kappa_to);
    const PhasePoint q = split_phase(u, d);
    ExtendedPoint out;
    out.t = s;
    rotate_to_phase(kappa_to * s, q.x, q.xi, out.x, out.xi);
    out.tau = tau_from_rho(field, s, kappa_to, rho, q.x, q.xi);
    return out;
}

ExtendedPoint interpolated_flow(const PerturbationField& field, double kappa,
                                const ExtendedPoint& start, const FlowConfig& cfg) {
    if (kappa < 0.0 || kappa > 1.0) throw config_error("interpolated_flow: kappa outside [0,1]");
    return interpolated_flow_segment(field, 0.0, kappa, start, cfg);
}

ExtendedPoint interpolated_flow_direct(const PerturbationField& field, double kappa_from,
                                       double kappa_to, const ExtendedPoint& p,
                                       const FlowConfig& cfg) {
    const int d = field.dim();
    const double t = p.t;
    // State [x, tau, xi]; t frozen. Right-hand sides are the analytic partial
    // derivatives of l in (xi, t, x), with w, gamma the rotated coordinates.
    OdeRhs rhs = [&field, t, d](double kappa, const Vec& u, Vec& du) {
        du.assign(2 * d + 1, 0.0);
        const Vec x(u.begin(), u.begin() + d);
        const Vec xi(u.begin() + d + 1, u.end());
        const double ang = -kappa * t;
        const double c = std::cos(ang), sn = std::sin(ang);
        Vec w(d), g(d);
        for (int i = 0; i < d; ++i) {
            w[i] = c * x[i] + sn * xi[i];
            g[i] = -sn * x[i] + c * xi[i];
        }
        const double T = (1.0 - kappa) * t;
        const double A = field.a_scalar(T, w) - 1.0;
        Vec dq;
        field.da_space_quad(T, w, g, dq);  // dq_k = d_k a * |g|^2
        const double dat = field.da_time_quad(T, w, g);
        const Vec gV = field.eval_gradV(T, w);
        const double Vt = field.eval_dV_time(T, w);
        const double V0 = field.eval_V(T, w);
        const double gg = sqnorm(g);
        double wg = 0.0;
        for (int i = 0; i < d; ++i) wg += w[i] * g[i];

        // dx_i/dkappa = dl/dxi_i, dxi_i/dkappa = -dl/dx_i
        for (int i = 0; i < d; ++i) {
            du[i] = -0.5 * t * sn * dq[i] - t * c * A * g[i] - t * sn * gV[i];
            du[d + 1 + i] = 0.5 * t * c * dq[i] - t * sn * A * g[i] + t * c * gV[i];
        }
        // dtau/dkappa = -dl/dt
        du[d] = 0.5 * A * gg + 0.5 * T * dat - 0.5 * t * kappa * dot(dq, g) +
                t * kappa * A * wg + V0 + T * Vt - t * kappa * dot(gV, g);
    };
    Vec u;
    u.insert(u.end(), p.x.begin(), p.x.end());
    u.push_back(p.tau);
    u.insert(u.end(), p.xi.begin(), p.xi.end());
    if (kappa_to != kappa_from) u = integrate(cfg, rhs, kappa_from, u, kappa_to);
    ExtendedPoint out;
    out.t = t;
    out.x.assign(u.begin(), u.begin() + d);
    out.tau = u[d];
    out.xi.assign(u.begin() + d + 1, u.end());
    return out;
}

ExtendedPoint scaled_map_at_lambda(const PerturbationField& field, double kappa, double lambda,
                                   double s, const Vec& y, double sigma, const Vec& eta,
                                   const FlowConfig& cfg) {
    ExtendedPoint start;
    start.t = s;
    start.x = y;
    start.tau = lambda * lambda * sigma;
    start.xi.resize(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) start.xi[i] = lambda * eta[i];
    ExtendedPoint f = interpolated_flow_segment(field, 0.0, kappa, start, cfg);
    f.tau /= lambda * lambda;
    for (double& v : f.xi) v /= lambda;
    return f;
}

LimitMapResult scaled_limit_map(const PerturbationField& field, double kappa, double s,
                                const Vec& y, double sigma, const Vec& eta,
                                const FlowConfig& cfg) {
    if (!(std::abs(s) < M_PI)) throw config_error("scaled_limit_map: requires |s| < pi");
    if (kappa <= 0.0 || kappa > 1.0) throw config_error("scaled_limit_map: kappa outside (0,1]");
    const int d = field.dim();
    LimitMapResult out;
    out.lambda_schedule = cfg.lambda_schedule;
    const std::size_t n = cfg.lambda_schedule.size();
    out.per_lambda.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.per_lambda[k] =
            scaled_map_at_lambda(field, kappa, cfg.lambda_schedule[k], s, y, sigma, eta, cfg);
    const double eps = field.epsilon();
    out.limit.t = s;
    out.limit.x.resize(d);
    out.limit.xi.resize(d);
    Vec vals(n);
    for (int i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < n; ++k) vals[k] = out.per_lambda[k].x[i];
        out.limit.x[i] = extrapolate_powerlaw(cfg.lambda_schedule, vals, eps).limit;
        for (std::size_t k = 0; k < n; ++k) vals[k] = out.per_lambda[k].xi[i];
        out.limit.xi[i] = extrapolate_powerlaw(cfg.lambda_schedule, vals, eps).limit;
    }
    for (std::size_t k = 0; k < n; ++k) vals[k] = out.per_lambda[k].tau;
    out.limit.tau = extrapolate_powerlaw(cfg.lambda_schedule, vals, eps).limit;
    out.residuals.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double r2 = 0.0;
        const double dt_ = out.per_lambda[k].tau - out.limit.tau;
        r2 += dt_ * dt_;
        for (int i = 0; i < d; ++i) {
            const double dx = out.per_lambda[k].x[i] - out.limit.x[i];
            const double dxi = out.per_lambda[k].xi[i] - out.limit.xi[i];
            r2 += dx * dx + dxi * dxi;
        }
        out.residuals[k] = std::sqrt(r2);
    }
    return out;
}

namespace {

// Flattens (t, x, tau, xi) for Jacobian assembly.
Vec flatten_extended(const ExtendedPoint& p) {
    Vec v;
    v.push_back(p.t);
    v.insert(v.end(), p.x.begin(), p.x.end());
    v.push_back(p.tau);
    v.insert(v.end(), p.xi.begin(), p.xi.end());
    return v;
}

JacobianResult jacobian_impl(const PerturbationField& field, double kappa, double s, const Vec& y,
                             double sigma, const Vec& eta, const FlowConfig& cfg, double fd_step,
                             double lambda /* <= 0: extrapolated limit */) {
    const int d = field.dim();
    const int m = 2 + 2 * d;
    auto eval = [&](const Vec& in) {
        const double ss = in[0];
        const Vec yy(in.begin() + 1, in.begin() + 1 + d);
        const double sg = in[1 + d];
        const Vec ee(in.begin() + 2 + d, in.end());
        if (lambda > 0.0)
            return flatten_extended(
                scaled_map_at_lambda(field, kappa, lambda, ss, yy, sg, ee, cfg));
        return flatten_extended(scaled_limit_map(field, kappa, ss, yy, sg, ee, cfg).limit);
    };
    Vec base;
    base.push_back(s);
    base.insert(base.end(), y.begin(), y.end());
    base.push_back(sigma);
    base.insert(base.end(), eta.begin(), eta.end());

    JacobianResult out;
    out.J.assign(m, Vec(m, 0.0));
    for (int col = 0; col < m; ++col) {
        const double h = fd_step * std::max(1.0, std::abs(base[col]));
        Vec ip = base, im = base;
        ip[col] += h;
        im[col] -= h;
        const Vec fp = eval(ip), fm = eval(im);
        for (int row = 0; row < m; ++row) out.J[row][col] = (fp[row] - fm[row]) / (2.0 * h);
    }
    out.det = det_small(out.J);
    out.singular = std::abs(out.det) < 1e-8;
    return out;
}

}  // namespace

JacobianResult limit_jacobian(const PerturbationField& field, double kappa, double s, const Vec& y,
                              double sigma, const Vec& eta, const FlowConfig& cfg,
                              double fd_step) {
    return jacobian_impl(field, kappa, s, y, sigma, eta, cfg, fd_step, -1.0);
}

JacobianResult jacobian_at_lambda(const PerturbationField& field, double kappa, double lambda,
                                  double s, const Vec& y, double sigma, const Vec& eta,
                                  const FlowConfig& cfg, double fd_step) {
    return jacobian_impl(field, kappa, s, y, sigma, eta, cfg, fd_step, lambda);
}

}  // namespace wfqh
