// Time-dependent short-range perturbations of the harmonic oscillator metric
// and potential. Built-in family (isotropic, closed form):
//   a_ij(t,x) = delta_ij * (1 + c_a * rho(t) * <x - c>^{-(1+eps)})
//   V(t,x)    = c_V * rho(t) * <x - c>^{1-eps}
// with rho either constant 1 or exp(-t^2), and <u> = sqrt(1+|u|^2). The profile
// is radial about the point (x_center, 0, ..., 0).
#pragma once

#include <vector>

#include "wfqh/numerics.hpp"

namespace wfqh {

enum class TimeShape { constant_one, gaussian };

struct FamilySpec {
    double c_a = 0.0;      // metric amplitude, |c_a| < 1
    double c_V = 0.0;      // potential amplitude
    double epsilon = 0.5;  // decay rate, > 0
    TimeShape t_shape = TimeShape::constant_one;
    double x_center = 0.0;
    int dim = 1;
};

class PerturbationField {
public:
    int dim() const { return spec_.dim; }
    double epsilon() const { return spec_.epsilon; }
    double bound_C() const { return bound_C_; }
    const FamilySpec& spec() const { return spec_; }
    bool is_trivial() const { return spec_.c_a == 0.0 && spec_.c_V == 0.0; }

    // Matrix-valued evaluators (cold path; validation and tests).
    std::vector<Vec> eval_a(double t, const Vec& x) const;         // d x d
    std::vector<Vec> eval_da_time(double t, const Vec& x) const;   // d x d
    // [k][i][j] flattened as k*(d*d) + i*d + j.
    Vec eval_da_space(double t, const Vec& x) const;
    double eval_V(double t, const Vec& x) const;
    Vec eval_gradV(double t, const Vec& x) const;
    double eval_dV_time(double t, const Vec& x) const;

    // Contraction helpers (hot path in the flow right-hand sides).
    double a_scalar(double t, const Vec& x) const;        // isotropic coefficient
    double a_quad(double t, const Vec& x, const Vec& v) const;          // v.a.v
    void a_apply(double t, const Vec& x, const Vec& v, Vec& out) const; // (a v)_i
    void da_space_quad(double t, const Vec& x, const Vec& v, Vec& out) const;  // out_k = d_k a_ij v_i v_j
    double da_time_quad(double t, const Vec& x, const Vec& v) const;

private:
    friend PerturbationField make_family(const FamilySpec&);
    FamilySpec spec_;
    double bound_C_ = 0.0;

    double rho(double t) const;
    double drho(double t) const;
    // r = x - center, q = <r>
    void center_offset(const Vec& x, Vec& r) const;
};

PerturbationField make_family(const FamilySpec& spec);

struct SampleBox {
    double t_lo = 0.0, t_hi = 0.0;
    Vec x_lo, x_hi;
};

struct ValidationReport {
    double ratio_a = 0.0;       // worst |a - delta| <x>^{1+eps} / C
    double ratio_da = 0.0;      // worst |grad_x a| <x>^{2+eps} / C
    double ratio_v = 0.0;       // worst |V| <x>^{-(1-eps)} / C
    double ratio_gradv = 0.0;   // worst |grad V| <x>^{eps} / C
    double m0 = 0.0;            // smallest sampled eigenvalue of a
    double fd_consistency = 0.0;  // worst relative derivative-vs-central-difference error
    bool pass = false;
};

ValidationReport validate_decay(const PerturbationField& field, const SampleBox& box,
                                int n_samples);

}  // namespace wfqh
