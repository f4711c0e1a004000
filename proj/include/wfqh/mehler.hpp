// Exact harmonic-oscillator propagation by Mehler kernel quadrature, with the
// quarter-period factorization near the kernel's caustic times.
#pragma once

#include "wfqh/grid.hpp"

namespace wfqh {

struct PropagatorConfig {
    double dt = 1e-4;            // Crank-Nicolson step
    double mehler_switch = 0.1;  // |sin t| below which quarter periods are split off
    bool kernel_direct = false;  // O(N^2) quadrature instead of the chirp path
    bool force_numeric = false;  // run the stepping scheme even on flat fields
};

// e^{-i t H} phi for H = (p^2 + x^2)/2. Any real t; the angle is reduced by
// full periods (a sign per period) and factored through exact quarter periods
// whenever |sin| at the remaining angle is below the aliasing-safe threshold.
WaveFunction mehler_propagate(const WaveFunction& phi, double t,
                              const PropagatorConfig& cfg = {});

// Rows sample e^{-i t_k H} phi on the frame [t0, t1) with n_t rows.
SpaceTimeField evolve_spacetime_os(const WaveFunction& phi, double t0, double t1, int n_t,
                                   const PropagatorConfig& cfg = {}, int threads = 1);

}  // namespace wfqh
