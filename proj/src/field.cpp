#include "wfqh/field.hpp"

#include <cmath>

namespace wfqh {

double PerturbationField::rho(double t) const {
    return spec_.t_shape == TimeShape::constant_one ? 1.0 : std::exp(-t * t);
}

double PerturbationField::drho(double t) const {
    return spec_.t_shape == TimeShape::constant_one ? 0.0 : -2.0 * t * std::exp(-t * t);
}

void PerturbationField::center_offset(const Vec& x, Vec& r) const {
    r = x;
    r[0] -= spec_.x_center;
}

double PerturbationField::a_scalar(double t, const Vec& x) const {
    Vec r;
    center_offset(x, r);
    const double q = jbracket(r);
    return 1.0 + spec_.c_a * rho(t) * std::pow(q, -(1.0 + spec_.epsilon));
}

double PerturbationField::a_quad(double t, const Vec& x, const Vec& v) const {
    return a_scalar(t, x) * sqnorm(v);
}

void PerturbationField::a_apply(double t, const Vec& x, const Vec& v, Vec& out) const {
    const double al = a_scalar(t, x);
    out.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = al * v[i];
}

void PerturbationField::da_space_quad(double t, const Vec& x, const Vec& v, Vec& out) const {
    Vec r;
    center_offset(x, r);
    const double q = jbracket(r);
    const double eps = spec_.epsilon;
    // d_k a = c_a rho(t) * (-(1+eps)) q^{-(3+eps)} r_k  (isotropic scalar factor)
    const double f = spec_.c_a * rho(t) * (-(1.0 + eps)) * std::pow(q, -(3.0 + eps));
    const double vv = sqnorm(v);
    out.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = f * r[k] * vv;
}

double PerturbationField::da_time_quad(double t, const Vec& x, const Vec& v) const {
    Vec r;
    center_offset(x, r);
    const double q = jbracket(r);
    return spec_.c_a * drho(t) * std::pow(q, -(1.0 + spec_.epsilon)) * sqnorm(v);
}

std::vector<Vec> PerturbationField::eval_a(double t, const Vec& x) const {
    const int d = spec_.dim;
    std::vector<Vec> m(d, Vec(d, 0.0));
    const double al = a_scalar(t, x);
    for (int i = 0; i < d; ++i) m[i][i] = al;
    return m;
}

std::vector<Vec> PerturbationField::eval_da_time(double t, const Vec& x) const {
    const int d = spec_.dim;
    std::vector<Vec> m(d, Vec(d, 0.0));
    Vec r;
    center_offset(x, r);
    const double q = jbracket(r);
    const double v = spec_.c_a * drho(t) * std::pow(q, -(1.0 + spec_.epsilon));
    for (int i = 0; i < d; ++i) m[i][i] = v;
    return m;
}

Vec PerturbationField::eval_da_space(double t, const Vec& x) const {
    const int d = spec_.dim;
    Vec out(static_cast<std::size_t>(d) * d * d, 0.0);
    Vec r;
    center_offset(x, r);
    const double q = jbracket(r);
    const double f =
        spec_.c_a * rho(t) * (-(1.0 + spec_.epsilon)) * std::pow(q, -(3.0 + spec_.epsilon));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(k) * d * d + i * d + i] = f * r[k];
    return out;
}

double PerturbationField::eval_V(double t, const Vec& x) const {
    Vec r;
    center_offset(x, r);
    return spec_.c_V * rho(t) * std::pow(jbracket(r), 1.0 - spec_.epsilon);
}

Vec PerturbationField::eval_gradV(double t, const Vec& x) const {
    Vec r;
    center_offset(x, r);
    const double q = jbracket(r);
    const double f =
        spec_.c_V * rho(t) * (1.0 - spec_.epsilon) * std::pow(q, -(1.0 + spec_.epsilon));
    Vec out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = f * r[k];
    return out;
}

double PerturbationField::eval_dV_time(double t, const Vec& x) const {
    Vec r;
    center_offset(x, r);
    return spec_.c_V * drho(t) * std::pow(jbracket(r), 1.0 - spec_.epsilon);
}

PerturbationField make_family(const FamilySpec& spec) {
    if (!(std::abs(spec.c_a) < 1.0))
        throw config_error(str_printf("make_family: |c_a| = %g must be < 1", std::abs(spec.c_a)));
    if (!(spec.epsilon > 0.0))
        throw config_error(str_printf("make_family: eps = %g must be positive", spec.epsilon));
    if (spec.dim < 1) throw config_error("make_family: dim must be >= 1");
    if (!std::isfinite(spec.c_V)) throw config_error("make_family: c_V not finite");
    PerturbationField f;
    f.spec_ = spec;
    // Covers every |alpha| <= 1 bound of the family: |a-1|<x>^{1+eps} <= |c_a|,
    // |grad a|<x>^{2+eps} <= (1+eps)|c_a|, |V|<x>^{eps-1} <= |c_V|,
    // |grad V|<x>^{eps} <= (1-eps)|c_V| when eps < 1 (and the bound only shrinks otherwise).
    f.bound_C_ = (1.0 + spec.epsilon) * std::max(std::abs(spec.c_a), std::abs(spec.c_V));
    return f;
}

ValidationReport validate_decay(const PerturbationField& field, const SampleBox& box,
                                int n_samples) {
    if (n_samples < 2) throw config_error("validate_decay: need >= 2 samples per axis");
    const int d = field.dim();
    if (static_cast<int>(box.x_lo.size()) != d || static_cast<int>(box.x_hi.size()) != d)
        throw config_error("validate_decay: box dimension mismatch");

    ValidationReport rep;
    rep.m0 = 1e300;
    const double C = field.bound_C();
    const double eps = field.epsilon();
    const double fd = 1e-5;

    // Lattice over (t, x): n_samples per axis including endpoints.
    long total = n_samples;
    for (int k = 0; k < d; ++k) total *= n_samples;
    Vec x(d);
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        const int it = static_cast<int>(rem % n_samples);
        rem /= n_samples;
        const double t =
            box.t_lo + (box.t_hi - box.t_lo) * it / static_cast<double>(n_samples - 1);
        for (int k = 0; k < d; ++k) {
            const int ik = static_cast<int>(rem % n_samples);
            rem /= n_samples;
            x[k] = box.x_lo[k] +
                   (box.x_hi[k] - box.x_lo[k]) * ik / static_cast<double>(n_samples - 1);
        }
        Vec r = x;
        r[0] -= field.spec().x_center;
        const double q = jbracket(r);

        const double al = field.a_scalar(t, x);
        rep.m0 = std::min(rep.m0, al);  // isotropic: eigenvalue = scalar coefficient

        double da_norm = 0.0;
        {
            // |grad_x a| for the isotropic family: magnitude of the scalar gradient.
            Vec g;
            Vec ones(d, 0.0);
            ones[0] = 1.0;
            field.da_space_quad(t, x, ones, g);  // g_k = d_k a, since |ones|^2 = 1
            da_norm = norm2(g);
        }
        const double Vv = std::abs(field.eval_V(t, x));
        const double gV = norm2(field.eval_gradV(t, x));

        if (C > 0.0) {
            rep.ratio_a = std::max(rep.ratio_a, std::abs(al - 1.0) * std::pow(q, 1.0 + eps) / C);
            rep.ratio_da = std::max(rep.ratio_da, da_norm * std::pow(q, 2.0 + eps) / C);
            rep.ratio_v = std::max(rep.ratio_v, Vv * std::pow(q, eps - 1.0) / C);
            rep.ratio_gradv = std::max(rep.ratio_gradv, gV * std::pow(q, eps) / C);
        }

        // Central-difference consistency of the supplied derivatives.
        {
            Vec xp = x, xm = x;
            xp[0] += fd;
            xm[0] -= fd;
            const double da_fd = (field.a_scalar(t, xp) - field.a_scalar(t, xm)) / (2 * fd);
            Vec ones(d, 0.0);
            ones[0] = 1.0;
            Vec g;
            field.da_space_quad(t, x, ones, g);
            const double scale = std::max(1e-8, std::abs(da_fd));
            rep.fd_consistency = std::max(rep.fd_consistency, std::abs(g[0] - da_fd) / scale);

            const double dv_fd = (field.eval_V(t, xp) - field.eval_V(t, xm)) / (2 * fd);
            const double sv = std::max(1e-8, std::abs(dv_fd));
            rep.fd_consistency =
                std::max(rep.fd_consistency, std::abs(field.eval_gradV(t, x)[0] - dv_fd) / sv);

            const double dat_fd =
                (field.a_scalar(t + fd, x) - field.a_scalar(t - fd, x)) / (2 * fd);
            const double sat = std::max(1e-8, std::abs(dat_fd));
            Vec e0(d, 0.0);
            e0[0] = 1.0;
            rep.fd_consistency =
                std::max(rep.fd_consistency, std::abs(field.da_time_quad(t, x, e0) - dat_fd) / sat);
        }
    }

    const bool ratios_ok = rep.ratio_a <= 1.0 && rep.ratio_da <= 1.0 && rep.ratio_v <= 1.0 &&
                           rep.ratio_gradv <= 1.0;
    rep.pass = ratios_ok && rep.m0 > 0.0;
    return rep;
}

}  // namespace wfqh
