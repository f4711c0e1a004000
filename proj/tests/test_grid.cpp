#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "wfqh/fft.hpp"
#include "wfqh/grid.hpp"

using namespace wfqh;

namespace {

double position_mean(const WaveFunction& f) {
    double m = 0.0, w = 0.0;
    for (int j = 0; j < f.grid.n; ++j) {
        double p = std::norm(f.values[j]);
        m += f.grid.x(j) * p;
        w += p;
    }
    return m / w;
}

double momentum_mean(const WaveFunction& f) {
    CVec fh = centered_ft(f.values, f.grid.dx(), -1);
    double dxi = reciprocal_spacing(f.grid.n, f.grid.dx());
    double m = 0.0, w = 0.0;
    for (int k = 0; k < f.grid.n; ++k) {
        double p = std::norm(fh[k]);
        m += (k - f.grid.n / 2) * dxi * p;
        w += p;
    }
    return m / w;
}

double h1_seminorm(const WaveFunction& f) {
    double s = 0.0;
    double dx = f.grid.dx();
    for (int j = 0; j + 1 < f.grid.n; ++j) s += std::norm(f.values[j + 1] - f.values[j]) / dx;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("grid construction and frame bookkeeping") {
    SpatialGrid g = make_grid(256, 8.0);
    CHECK(g.dx() == doctest::Approx(0.0625));
    CHECK(g.x(0) == doctest::Approx(-8.0));
    CHECK(g.x(128) == doctest::Approx(0.0));
    CHECK_THROWS_AS(make_grid(100, 8.0), config_error);
    CHECK_THROWS_AS(make_grid(4, 8.0), config_error);
    CHECK_THROWS_AS(make_grid(256, -1.0), config_error);

    SpaceTimeField u = make_field_frame(g, -0.55, 1.55, 256);
    CHECK(u.dt() == doctest::Approx(2.1 / 256));
    // the slice t = 0.5 lands exactly on a row of this frame
    CHECK(u.t(128) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(make_field_frame(g, 1.0, 0.0, 16), config_error);
}

TEST_CASE("coherent state: normalization, moments, boundary guard") {
    SpatialGrid g = make_grid(2048, 10.0);
    WaveFunction f = coherent_state(g, 0.5, 0.5, 1.0);
    CHECK(std::abs(wf_norm(f) - 1.0) < 1e-10);
    CHECK(std::abs(position_mean(f) - 0.5) < g.dx());
    CHECK(momentum_mean(f) == doctest::Approx(0.5).epsilon(1e-6));

    WaveFunction fine = coherent_state(g, -1.0, 2.0, 0.125);
    CHECK(momentum_mean(fine) == doctest::Approx(16.0).epsilon(1e-6));

    SpatialGrid tiny = make_grid(64, 2.0);
    CHECK_THROWS_AS(coherent_state(tiny, 1.5, 0.0, 1.0), config_error);
    CHECK_THROWS_AS(coherent_state(g, 0.0, 0.0, -0.5), config_error);
}

TEST_CASE("singular state: cusp pinned at zero, H1 stability, spectral tail") {
    double s0 = 0.75, width = 1.0;
    SpatialGrid g = make_grid(1024, 8.0);
    WaveFunction f = singular_state(g, 0.0, s0, width);
    CHECK(std::abs(wf_norm(f) - 1.0) < 1e-12);
    CHECK(std::abs(f.values[512]) == 0.0);

    CHECK_THROWS_AS(singular_state(g, 0.0, 0.4, width), config_error);
    CHECK_THROWS_AS(singular_state(g, 0.0, 1.0, width), config_error);

    WaveFunction f2 = singular_state(make_grid(2048, 8.0), 0.0, s0, width);
    double r = h1_seminorm(f2) / h1_seminorm(f);
    CHECK(r == doctest::Approx(1.0).epsilon(0.05));

    // |x|^{s0} cusp: spectral tail exponent -(s0+1), fitted over one decade
    CVec fh = centered_ft(f.values, g.dx(), -1);
    double dxi = reciprocal_spacing(g.n, g.dx());
    Vec lk, la;
    for (int k = 0; k < g.n; ++k) {
        double xi = (k - g.n / 2) * dxi;
        if (xi >= 5.0 && xi <= 50.0) {
            lk.push_back(std::log(xi));
            la.push_back(std::log(std::abs(fh[k])));
        }
    }
    LineFit fit = fit_line(lk, la);
    CHECK(fit.slope == doctest::Approx(-(s0 + 1.0)).epsilon(0.2 / 1.75));
}

TEST_CASE("field persistence round trip") {
    SpatialGrid g = make_grid(32, 3.0);
    SpaceTimeField u = make_field_frame(g, -0.2, 0.9, 8);
    for (int k = 0; k < u.n_t; ++k)
        for (int j = 0; j < g.n; ++j)
            u.rows[k][j] = Cplx{std::sin(0.1 * k + 0.2 * j), std::cos(0.3 * k - 0.05 * j)};

    std::string path = "roundtrip_field.bin";
    save_field(u, path, "unit check");
    SpaceTimeField v = load_field(path);
    CHECK(v.grid == g);
    CHECK(v.n_t == 8);
    CHECK(v.t0 == u.t0);
    CHECK(v.t1 == u.t1);
    double worst = 0.0;
    for (int k = 0; k < u.n_t; ++k)
        for (int j = 0; j < g.n; ++j)
            worst = std::max(worst, std::abs(u.rows[k][j] - v.rows[k][j]));
    CHECK(worst == 0.0);
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());

    CHECK_THROWS_AS(load_field("no_such_field.bin"), config_error);
}

TEST_CASE("row norm spread of a unitary family is zero-ish") {
    SpatialGrid g = make_grid(64, 4.0);
    SpaceTimeField u = make_field_frame(g, 0.0, 1.0, 4);
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 64; ++j)
            u.rows[k][j] = std::polar(std::exp(-g.x(j) * g.x(j)), 0.3 * k * g.x(j));
    CHECK(row_norm_spread(u) < 1e-14);
}
