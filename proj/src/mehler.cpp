#include "wfqh/mehler.hpp"

#include <cmath>

#include "wfqh/fft.hpp"

namespace wfqh {

namespace {

// Single kernel application, valid away from sin t = 0:
//   (U(t) f)(x) = e^{-i pi/4 - i (pi/2) floor(t/pi)} (2 pi |sin t|)^{-1/2}
//                 * int exp(i [(x^2+y^2) cos t - 2 x y] / (2 sin t)) f(y) dy.
// The chirp path rewrites the integral as e^{i x^2 cot/2} * scaled centered
// DFT * e^{i y^2 cot/2} with kernel angle theta = dx^2 / sin t.
WaveFunction kernel_apply(const WaveFunction& f, double t, bool direct) {
    const SpatialGrid& g = f.grid;
    double s = std::sin(t), co = std::cos(t);
    double amp = g.dx() / std::sqrt(2.0 * M_PI * std::abs(s));
    Cplx pref = std::polar(amp, -M_PI / 4.0 - M_PI / 2.0 * std::floor(t / M_PI));
    WaveFunction out{g, CVec(g.n)};
    if (direct) {
        for (int j = 0; j < g.n; ++j) {
            double x = g.x(j);
            Cplx acc{0.0, 0.0};
            for (int k = 0; k < g.n; ++k) {
                double y = g.x(k);
                acc += std::polar(1.0, ((x * x + y * y) * co - 2.0 * x * y) / (2.0 * s)) *
                       f.values[k];
            }
            out.values[j] = pref * acc;
        }
        return out;
    }
    double cot = co / s;
    CVec a(g.n);
    for (int k = 0; k < g.n; ++k) {
        double y = g.x(k);
        a[k] = f.values[k] * std::polar(1.0, y * y * cot / 2.0);
    }
    a = scaled_cdft(a, g.dx() * g.dx() / s);
    for (int j = 0; j < g.n; ++j) {
        double x = g.x(j);
        out.values[j] = pref * a[j] * std::polar(1.0, x * x * cot / 2.0);
    }
    return out;
}

}  // namespace

WaveFunction mehler_propagate(const WaveFunction& phi, double t, const PropagatorConfig& cfg) {
    const SpatialGrid& g = phi.grid;
    // Chirp sampling needs L |cot t| <= pi/dx on the grid; quarter periods are
    // split off below the matching |sin t| threshold.
    double switch_at = std::max(cfg.mehler_switch, 1.25 * g.half_width * g.dx() / M_PI);
    if (!(switch_at < 0.7))
        throw config_error("mehler_propagate: grid too coarse for alias-free quadrature");

    long periods = std::lround(t / (2.0 * M_PI));
    double tr = t - 2.0 * M_PI * periods;  // U(t + 2 pi k) = (-1)^k U(t)
    WaveFunction cur = phi;
    if (tr != 0.0) {
        long q = std::lround(tr / (M_PI / 2.0));
        double rem = tr - q * (M_PI / 2.0);
        if (rem != 0.0 && std::abs(std::sin(rem)) < switch_at) {
            q -= 1;
            rem += M_PI / 2.0;
        }
        int dir = q >= 0 ? 1 : -1;
        for (long i = 0; i < std::labs(q); ++i)
            cur = kernel_apply(cur, dir * M_PI / 2.0, cfg.kernel_direct);
        if (rem != 0.0) cur = kernel_apply(cur, rem, cfg.kernel_direct);
    }
    if (periods & 1)
        for (auto& v : cur.values) v = -v;
    return cur;
}

SpaceTimeField evolve_spacetime_os(const WaveFunction& phi, double t0, double t1, int n_t,
                                   const PropagatorConfig& cfg, int threads) {
    SpaceTimeField u = make_field_frame(phi.grid, t0, t1, n_t);
    parallel_for(n_t, threads, [&](std::size_t k) {
        u.rows[k] = mehler_propagate(phi, u.t(static_cast<int>(k)), cfg).values;
    });
    return u;
}

}  // namespace wfqh
