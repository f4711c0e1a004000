#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wfqh/classical.hpp"

using namespace wfqh;

namespace {
FamilySpec gaussian_spec() {
    FamilySpec fs;
    fs.c_a = 0.1;
    fs.c_V = 0.1;
    fs.epsilon = 0.5;
    fs.t_shape = TimeShape::gaussian;
    return fs;
}
}  // namespace

TEST_CASE("unperturbed scattering is the identity") {
    auto f = make_family(FamilySpec{});
    FlowConfig cfg;
    const auto sd = scattering_data(f, 0.5, Vec{1.0}, 0.2, Vec{1.0}, cfg);
    CHECK(sd.x_plus[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sd.xi_plus[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sd.sigma_limit == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("built-in family scattering against an external reference") {
    auto f = make_family(gaussian_spec());
    FlowConfig cfg;
    cfg.rtol = cfg.atol = 1e-12;
    const auto sd = scattering_data(f, 0.5, Vec{1.0}, 0.2, Vec{1.0}, cfg);
    // Reference limits from an independent high-order integration with a
    // larger lambda schedule.
    CHECK(sd.x_plus[0] == doctest::Approx(0.8692385140043564).epsilon(5e-6));
    CHECK(sd.xi_plus[0] == doctest::Approx(1.0228918573532022).epsilon(5e-6));

    // Structural identities of a decaying metric: |xi+| = sqrt(a(s,y)) |eta|
    // and Sigma = sigma.
    const double al = f.a_scalar(0.5, Vec{1.0});
    CHECK(sd.xi_plus[0] == doctest::Approx(std::sqrt(al)).epsilon(1e-5));
    CHECK(sd.sigma_limit == doctest::Approx(0.2).epsilon(1e-5));

    // Residuals decrease along the schedule tail.
    const std::size_t n = sd.residuals.size();
    CHECK(sd.residuals[n - 1] <= sd.residuals[n - 2] * (1.0 + 1e-6) + 1e-12);
    CHECK(sd.residuals[n - 1] < 1e-3);
}

TEST_CASE("scattering respects eta reflection through the center") {
    // Family centered at 0 is even in x, so (s, -y, -eta) mirrors (s, y, eta).
    auto f = make_family(gaussian_spec());
    FlowConfig cfg;
    const auto a = scattering_data(f, 0.5, Vec{1.0}, 0.2, Vec{1.0}, cfg);
    const auto b = scattering_data(f, 0.5, Vec{-1.0}, 0.2, Vec{-1.0}, cfg);
    CHECK(b.x_plus[0] == doctest::Approx(-a.x_plus[0]).epsilon(1e-10));
    CHECK(b.xi_plus[0] == doctest::Approx(-a.xi_plus[0]).epsilon(1e-10));
    CHECK(b.sigma_limit == doctest::Approx(a.sigma_limit).epsilon(1e-10));
}
