// Explicit Runge-Kutta integrators on flat double states: Dormand-Prince 5(4)
// with step control, and fixed-step classical RK4 for reproducibility runs.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "wfqh/numerics.hpp"

namespace wfqh {

using OdeRhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 1e-3;
    long max_steps = 4000000;
};

// Integrates y' = f(t, y) from t0 to t1 (either direction). Throws numeric_error
// carrying the last good time on step failure or non-finite state.
inline Vec integrate_rk45(const OdeRhs& f, double t0, const Vec& y0, double t1,
                          const OdeOptions& opt = {}) {
    // Dormand-Prince coefficients.
    static const double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double b5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0.0};
    static const double b4[7] = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    const std::size_t n = y0.size();
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    if (span == 0.0) return y0;

    Vec y = y0, ytmp(n), yerr(n), ynew(n);
    Vec k[7];
    for (auto& kk : k) kk.assign(n, 0.0);

    double t = t0;
    double h = dir * std::min(opt.initial_step, span);
    long steps = 0;
    f(t, y, k[0]);
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opt.max_steps)
            throw numeric_error(str_printf("integrate_rk45: step budget exhausted at t=%.6g", t));
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += A[s][j] * k[j][i];
                ytmp[i] = y[i] + h * acc;
            }
            f(t + c[s] * h, ytmp, k[s]);
        }
        double errn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double y5 = 0.0, y4 = 0.0;
            for (int s = 0; s < 7; ++s) {
                y5 += b5[s] * k[s][i];
                y4 += b4[s] * k[s][i];
            }
            ynew[i] = y[i] + h * y5;
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = h * (y5 - y4) / sc;
            errn += e * e;
        }
        errn = std::sqrt(errn / n);
        if (!std::isfinite(errn))
            throw numeric_error(str_printf("integrate_rk45: non-finite state at t=%.6g", t));
        if (errn <= 1.0) {
            t += h;
            y.swap(ynew);
            k[0] = k[6];  // FSAL: stage 7 was evaluated at (t+h, ynew)
        }
        const double fac = std::clamp(0.9 * std::pow(errn > 0 ? 1.0 / errn : 1e10, 0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw numeric_error(str_printf("integrate_rk45: step underflow at t=%.6g", t));
    }
    return y;
}

inline Vec integrate_rk4(const OdeRhs& f, double t0, const Vec& y0, double t1, long nsteps) {
    if (nsteps < 1) throw config_error("integrate_rk4: nsteps must be >= 1");
    const std::size_t n = y0.size();
    const double h = (t1 - t0) / static_cast<double>(nsteps);
    Vec y = y0, k1(n), k2(n), k3(n), k4(n), ytmp(n);
    double t = t0;
    for (long m = 0; m < nsteps; ++m) {
        f(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        f(t + 0.5 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        f(t + 0.5 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
        f(t + h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = t0 + (m + 1) * h;
    }
    return y;
}

}  // namespace wfqh
