// Shared scalar helpers: smooth cutoffs, least squares, error types, parallel loops.
#pragma once

#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace wfqh {

using Vec = std::vector<double>;
using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;

// Scenario/parameter problems; the CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& m) : std::runtime_error(m) {}
};

// Runtime numerical failures (divergence, non-convergence, degenerate fits); exit code 1.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& m) : std::runtime_error(m) {}
};

inline std::string str_printf(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    char buf[512];
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return std::string(buf);
}

// <x> = sqrt(1 + |x|^2), the Japanese bracket.
inline double jbracket(double x) { return std::sqrt(1.0 + x * x); }
inline double jbracket(const Vec& x) {
    double s = 1.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double sqnorm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}
inline double norm2(const Vec& v) { return std::sqrt(sqnorm(v)); }
inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// C^inf bump on (-1,1), normalized to 1 at the origin: exp(1 - 1/(1-u^2)).
inline double bump(double u) {
    const double q = 1.0 - u * u;
    if (q <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / q);
}

// C^inf monotone step: 0 for u <= 0, 1 for u >= 1.
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double fa = std::exp(-1.0 / u);
    const double fb = std::exp(-1.0 / (1.0 - u));
    return fa / (fa + fb);
}

// Ordinary least squares y = slope*x + icept.
struct LineFit {
    double slope = 0.0, icept = 0.0;
};
inline LineFit fit_line(const Vec& x, const Vec& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw numeric_error("fit_line: need >= 2 paired samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (std::abs(den) < 1e-300) throw numeric_error("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.icept = (sy - f.slope * sx) / n;
    return f;
}

// Deterministic work sharing: body(i) for i in [0, n); results must go to
// preassigned slots, so the schedule never affects output.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nw);
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += nw) body(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace wfqh
