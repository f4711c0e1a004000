// Classical dynamics: frozen-time kinetic flow and high-energy scattering data,
// the reduced / scaled flow pair with the hatted change of variables, Mourre
// diagnostics, the interpolated kappa-flow F_l with its conserved-quantity tau
// reconstruction, and the rescaled limit map with Richardson extrapolation.
#pragma once

#include <utility>
#include <vector>

#include "wfqh/field.hpp"
#include "wfqh/numerics.hpp"

namespace wfqh {

struct PhasePoint {
    Vec x, xi;
};

struct ExtendedPoint {
    double t = 0.0;
    Vec x;
    double tau = 0.0;
    Vec xi;
};

// Point of R^{1+d} x S^d: (tau_hat, xi_hat) lies on the unit sphere.
struct DirectionPoint {
    double t = 0.0;
    Vec x;
    double tau_hat = 0.0;
    Vec xi_hat;
};

enum class Integrator { rk45_adaptive, rk4 };

struct FlowConfig {
    Integrator integrator = Integrator::rk45_adaptive;
    double rtol = 1e-10;
    double atol = 1e-10;
    double dt = 1e-3;  // fixed-step size for rk4
    Vec lambda_schedule{10, 30, 100, 300, 1000, 3000};
    int kappa_points = 257;  // sampling resolution for diagnostics grids
};

struct ScatteringDatum {
    Vec x_plus, xi_plus;
    double sigma_limit = 0.0;
    Vec lambda_schedule;
    Vec residuals;  // per-lambda distance of (x+, xi+) samples to the limit
    std::vector<PhasePoint> per_lambda;  // bracketed values before extrapolation
};

struct NontrapWitness {
    bool ok = false;
    Vec lambdas, radii;
    double slope = 0.0;  // log-log fit over the top three schedule entries
};

struct MourreReport {
    Vec kappa, energy, radius, convexity;  // convexity: 2nd central difference of radius^2
    double lambda = 0.0, delta = 0.0;
    double c1 = 0.0, c2 = 0.0;   // empirical kinetic-energy bounds
    double kappa0 = 0.0;         // onset of certified convexity
    double tail_slope = 0.0, tail_icept = 0.0;  // linear fit of radius on the tail
    bool convexity_ok = false;   // convexity >= 0 on [kappa0, delta*lambda]
    PhasePoint hat_end;          // hatted variables at the final kappa sample
};

struct LimitMapResult {
    ExtendedPoint limit;
    std::vector<ExtendedPoint> per_lambda;
    Vec lambda_schedule;
    Vec residuals;  // combined component distance to the limit per lambda
};

struct JacobianResult {
    std::vector<Vec> J;  // (2+2d) x (2+2d), rows ordered (t, x, tau, xi)
    double det = 0.0;
    bool singular = false;  // |det| < 1e-8
};

// --- frozen-time kinetic flow -------------------------------------------------
PhasePoint hamilton_flow(const PerturbationField& field, double s, const Vec& y, const Vec& eta,
                         double t_target, const FlowConfig& cfg);
double frozen_energy(const PerturbationField& field, double s, const PhasePoint& p);
NontrapWitness is_nontrapping(const PerturbationField& field, double s, const Vec& y,
                              const Vec& eta, const FlowConfig& cfg,
                              double slope_threshold = 0.8);
ScatteringDatum scattering_data(const PerturbationField& field, double s, const Vec& y,
                                double sigma, const Vec& eta, const FlowConfig& cfg);

// --- characteristic directions ------------------------------------------------
double normalization_mu(const PerturbationField& field, double t, const Vec& x, const Vec& xi);
DirectionPoint pi_map(const PerturbationField& field, double t, const Vec& x, const Vec& xi);
DirectionPoint pi_os_map(double t, const Vec& x, const Vec& xi);

// --- reduced and scaled kappa-flows -------------------------------------------
PhasePoint reduced_flow(const PerturbationField& field, double s, const Vec& y, const Vec& gamma0,
                        double kappa_target, const FlowConfig& cfg);
PhasePoint scaled_flow(const PerturbationField& field, double lambda, double s, const Vec& y,
                       const Vec& eta, double kappa_target, const FlowConfig& cfg);
PhasePoint hat_transform(double lambda, double s, double kappa, const PhasePoint& p);
PhasePoint hat_transform_inverse(double lambda, double s, double kappa, const PhasePoint& p);
MourreReport mourre_diagnostics(const PerturbationField& field, double lambda, double s,
                                const Vec& y, const Vec& eta, double delta,
                                const FlowConfig& cfg);

// --- interpolated flow F_l ----------------------------------------------------
// Generator symbol of the conjugated evolution; vanishes identically for the
// unperturbed field. Exposed for the finite-difference cross-checks.
double l_symbol(const PerturbationField& field, double kappa, const ExtendedPoint& p);

// Flow of l from parameter kappa_from to kappa_to through the reduced system
// plus the conserved-quantity reconstruction of tau. t stays frozen.
ExtendedPoint interpolated_flow_segment(const PerturbationField& field, double kappa_from,
                                        double kappa_to, const ExtendedPoint& p,
                                        const FlowConfig& cfg);
ExtendedPoint interpolated_flow(const PerturbationField& field, double kappa,
                                const ExtendedPoint& start, const FlowConfig& cfg);
// Independent oracle: direct integration of Hamilton's equations of l in
// (x, tau, xi), with analytically differentiated right-hand sides.
ExtendedPoint interpolated_flow_direct(const PerturbationField& field, double kappa_from,
                                       double kappa_to, const ExtendedPoint& p,
                                       const FlowConfig& cfg);

// --- rescaled limit map -------------------------------------------------------
// Theta_lambda (s,y,sigma,eta) = (s, y, lambda^2 sigma, lambda eta).
ExtendedPoint scaled_map_at_lambda(const PerturbationField& field, double kappa, double lambda,
                                   double s, const Vec& y, double sigma, const Vec& eta,
                                   const FlowConfig& cfg);
LimitMapResult scaled_limit_map(const PerturbationField& field, double kappa, double s,
                                const Vec& y, double sigma, const Vec& eta,
                                const FlowConfig& cfg);
JacobianResult limit_jacobian(const PerturbationField& field, double kappa, double s, const Vec& y,
                              double sigma, const Vec& eta, const FlowConfig& cfg,
                              double fd_step = 1e-4);
// Jacobian of the finite-lambda map (no extrapolation); uniform-convergence proxy.
JacobianResult jacobian_at_lambda(const PerturbationField& field, double kappa, double lambda,
                                  double s, const Vec& y, double sigma, const Vec& eta,
                                  const FlowConfig& cfg, double fd_step = 1e-4);

}  // namespace wfqh
