#include "wfqh/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace wfqh {

namespace {

struct Plan {
    std::vector<int> rev;
    CVec w;  // e^{-2 pi i k / n}, k < n/2
};

// Plans are kept forever; map nodes stay put, so the reference outlives the lock.
const Plan& plan_for(int n) {
    static std::map<int, Plan> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        Plan p;
        int logn = 0;
        while ((1 << logn) < n) ++logn;
        p.rev.resize(n);
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < logn; ++b) r |= ((i >> b) & 1) << (logn - 1 - b);
            p.rev[i] = r;
        }
        p.w.resize(n / 2);
        for (int k = 0; k < n / 2; ++k) p.w[k] = std::polar(1.0, -2.0 * M_PI * k / n);
        it = cache.emplace(n, std::move(p)).first;
    }
    return it->second;
}

}  // namespace

void fft_pow2(CVec& a, int sign) {
    int n = static_cast<int>(a.size());
    if (n <= 1) return;
    if (n & (n - 1)) throw config_error("fft_pow2: length must be a power of two");
    const Plan& p = plan_for(n);
    for (int i = 0; i < n; ++i)
        if (i < p.rev[i]) std::swap(a[i], a[p.rev[i]]);
    for (int len = 2; len <= n; len <<= 1) {
        int half = len / 2, stride = n / len;
        for (int base = 0; base < n; base += len) {
            for (int k = 0; k < half; ++k) {
                Cplx w = p.w[k * stride];
                if (sign > 0) w = std::conj(w);
                Cplx u = a[base + k], v = a[base + k + half] * w;
                a[base + k] = u + v;
                a[base + k + half] = u - v;
            }
        }
    }
}

double reciprocal_spacing(int n, double dx) { return 2.0 * M_PI / (n * dx); }

CVec centered_ft(const CVec& f, double dx, int sign) {
    int n = static_cast<int>(f.size());
    CVec a(n);
    for (int j = 0; j < n; ++j) a[j] = (j & 1) ? -f[j] : f[j];
    fft_pow2(a, sign);
    // Index centering: sum_j f_j e^{sign i 2pi (j-n/2)(k-n/2)/n}
    //   = (-1)^k e^{sign i pi n/2} sum_j (-1)^j f_j e^{sign i 2pi jk/n}.
    Cplx corner = std::polar(1.0, sign * M_PI * n / 2.0);
    double scale = dx / std::sqrt(2.0 * M_PI);
    for (int k = 0; k < n; ++k) {
        Cplx c = corner * scale;
        if (k & 1) c = -c;
        a[k] *= c;
    }
    return a;
}

CVec scaled_cdft(const CVec& f, double theta) {
    int n = static_cast<int>(f.size());
    if (n < 2 || (n & (n - 1))) throw config_error("scaled_cdft: length must be a power of two");
    int m = 2 * n, c = n / 2;
    CVec A(m, Cplx{0.0, 0.0}), B(m, Cplx{0.0, 0.0});
    for (int j = 0; j < n; ++j) {
        double mj = j - c;
        A[j] = f[j] * std::polar(1.0, -theta * mj * mj / 2.0);
    }
    // Chirp over lags -(n-1)..n-1; even in the lag, wrapped into [0, m).
    B[0] = Cplx{1.0, 0.0};
    for (int q = 1; q < n; ++q) {
        Cplx g = std::polar(1.0, theta * static_cast<double>(q) * q / 2.0);
        B[q] = g;
        B[m - q] = g;
    }
    fft_pow2(A, -1);
    fft_pow2(B, -1);
    for (int k = 0; k < m; ++k) A[k] *= B[k];
    fft_pow2(A, +1);
    CVec out(n);
    for (int k = 0; k < n; ++k) {
        double nk = k - c;
        out[k] = A[k] / static_cast<double>(m) * std::polar(1.0, -theta * nk * nk / 2.0);
    }
    return out;
}

SpectralField field_ft2(const SpaceTimeField& u, int threads) {
    SpectralField g;
    g.n_t = u.n_t;
    g.n_x = u.grid.n;
    g.dxi = reciprocal_spacing(u.grid.n, u.grid.dx());
    g.dtau = reciprocal_spacing(u.n_t, u.dt());
    std::vector<CVec> xrows(u.n_t);
    parallel_for(u.n_t, threads, [&](std::size_t k) {
        xrows[k] = centered_ft(u.rows[k], u.grid.dx(), -1);
    });
    g.rows.assign(g.n_t, CVec(g.n_x));
    parallel_for(g.n_x, threads, [&](std::size_t j) {
        CVec col(g.n_t);
        for (int mrow = 0; mrow < g.n_t; ++mrow) col[mrow] = xrows[mrow][j];
        col = centered_ft(col, u.dt(), -1);
        for (int mrow = 0; mrow < g.n_t; ++mrow) g.rows[mrow][j] = col[mrow];
    });
    return g;
}

void field_ift2_into(const SpectralField& g, SpaceTimeField& u, int threads) {
    if (g.n_t != u.n_t || g.n_x != u.grid.n)
        throw config_error("field_ift2_into: frame mismatch");
    std::vector<CVec> trows(g.n_t, CVec(g.n_x));
    parallel_for(g.n_x, threads, [&](std::size_t j) {
        CVec col(g.n_t);
        for (int mrow = 0; mrow < g.n_t; ++mrow) col[mrow] = g.rows[mrow][j];
        col = centered_ft(col, g.dtau, +1);
        for (int mrow = 0; mrow < g.n_t; ++mrow) trows[mrow][j] = col[mrow];
    });
    parallel_for(g.n_t, threads, [&](std::size_t k) {
        u.rows[k] = centered_ft(trows[k], g.dxi, +1);
    });
}

double spectral_norm(const SpectralField& g) {
    double s = 0.0;
    for (const auto& row : g.rows)
        for (const auto& v : row) s += std::norm(v);
    return std::sqrt(s * g.dtau * g.dxi);
}

}  // namespace wfqh
