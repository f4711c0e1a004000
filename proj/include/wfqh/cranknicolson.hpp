// Crank-Nicolson (Cayley) propagation of i u_t = (-(1/2) d/dx a(t,x) d/dx
// + x^2/2 + V(t,x)) u with Dirichlet walls, plus the kappa-interpolated
// composition with the exact oscillator propagator.
#pragma once

#include "wfqh/field.hpp"
#include "wfqh/grid.hpp"
#include "wfqh/mehler.hpp"

namespace wfqh {

struct CnDiagnostics {
    double norm_drift = 0.0;     // max relative change of the L^2 norm over all steps
    double boundary_mass = 0.0;  // max edge probability density seen, dx |u|^2 at the walls
    bool boundary_ok = true;     // boundary_mass <= 1e-8
};

// Data phi lives at time 0; the window may sit on either side of it. Rows
// are exact snapshot times (the step subdivides each row gap evenly).
SpaceTimeField propagate_perturbed(const WaveFunction& phi, const PerturbationField& field,
                                   double t0, double t1, int n_t, const PropagatorConfig& cfg,
                                   CnDiagnostics* diag = nullptr);

// Single-state propagation time 0 -> t_to along the same scheme.
WaveFunction cn_evolve_state(const WaveFunction& phi, const PerturbationField& field,
                             double t_to, const PropagatorConfig& cfg,
                             CnDiagnostics* diag = nullptr);

// e^{-i kappa t H_os} U((1 - kappa) t) phi. Fields whose perturbation
// amplitudes vanish identically make U itself the oscillator propagator, so
// the whole composition collapses to one exact quadrature; cfg.force_numeric
// keeps the stepping leg anyway.
WaveFunction interpolated_state(const WaveFunction& phi, const PerturbationField& field,
                                double kappa, double t, const PropagatorConfig& cfg);

}  // namespace wfqh
