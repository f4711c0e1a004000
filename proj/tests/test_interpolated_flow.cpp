#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wfqh/classical.hpp"

using namespace wfqh;

namespace {
FamilySpec perturbed_spec() {
    FamilySpec fs;
    fs.c_a = 0.3;
    fs.c_V = 0.2;
    fs.epsilon = 0.5;
    fs.t_shape = TimeShape::gaussian;
    return fs;
}

ExtendedPoint sample_point() {
    ExtendedPoint p;
    p.t = 0.5;
    p.x = Vec{1.0};
    p.tau = -0.3;
    p.xi = Vec{1.2};
    return p;
}
}  // namespace

TEST_CASE("interpolated flow is the identity for the trivial field") {
    auto f = make_family(FamilySpec{});
    FlowConfig cfg;
    const auto p = sample_point();
    for (double kap : {0.25, 1.0}) {
        const auto q = interpolated_flow(f, kap, p, cfg);
        CHECK(q.t == doctest::Approx(p.t).epsilon(1e-13));
        CHECK(q.x[0] == doctest::Approx(p.x[0]).epsilon(1e-10));
        CHECK(q.tau == doctest::Approx(p.tau).epsilon(1e-10));
        CHECK(q.xi[0] == doctest::Approx(p.xi[0]).epsilon(1e-10));
    }
    CHECK(l_symbol(f, 0.4, p) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("two independent flow routes agree") {
    auto f = make_family(perturbed_spec());
    FlowConfig cfg;
    cfg.rtol = cfg.atol = 1e-12;
    const auto p = sample_point();
    for (double kap : {0.3, 0.7, 1.0}) {
        const auto a = interpolated_flow(f, kap, p, cfg);
        const auto b = interpolated_flow_direct(f, 0.0, kap, p, cfg);
        CHECK(a.x[0] == doctest::Approx(b.x[0]).epsilon(1e-8));
        CHECK(a.tau == doctest::Approx(b.tau).epsilon(1e-8));
        CHECK(a.xi[0] == doctest::Approx(b.xi[0]).epsilon(1e-8));
    }
}

TEST_CASE("flow derivative matches the finite-difference hamilton field of l") {
    auto f = make_family(perturbed_spec());
    FlowConfig cfg;
    cfg.rtol = cfg.atol = 1e-12;
    const double kap = 0.6;
    const auto p = interpolated_flow(f, kap, sample_point(), cfg);

    const double dk = 1e-5;
    const auto fwd = interpolated_flow_segment(f, kap, kap + dk, p, cfg);
    const auto bwd = interpolated_flow_segment(f, kap, kap - dk, p, cfg);
    const double dx_dk = (fwd.x[0] - bwd.x[0]) / (2 * dk);
    const double dxi_dk = (fwd.xi[0] - bwd.xi[0]) / (2 * dk);
    const double dtau_dk = (fwd.tau - bwd.tau) / (2 * dk);

    const double h = 1e-6;
    auto at = [&](double t, double x, double xi) {
        ExtendedPoint q = p;
        q.t = t;
        q.x[0] = x;
        q.xi[0] = xi;
        return l_symbol(f, kap, q);
    };
    const double dl_dxi = (at(p.t, p.x[0], p.xi[0] + h) - at(p.t, p.x[0], p.xi[0] - h)) / (2 * h);
    const double dl_dx = (at(p.t, p.x[0] + h, p.xi[0]) - at(p.t, p.x[0] - h, p.xi[0])) / (2 * h);
    const double dl_dt = (at(p.t + h, p.x[0], p.xi[0]) - at(p.t - h, p.x[0], p.xi[0])) / (2 * h);

    CHECK(dx_dk == doctest::Approx(dl_dxi).epsilon(1e-6));
    CHECK(dxi_dk == doctest::Approx(-dl_dx).epsilon(1e-6));
    CHECK(dtau_dk == doctest::Approx(-dl_dt).epsilon(1e-6));
}

TEST_CASE("segment composition") {
    auto f = make_family(perturbed_spec());
    FlowConfig cfg;
    cfg.rtol = cfg.atol = 1e-12;
    const auto p = sample_point();
    const auto mid = interpolated_flow_segment(f, 0.0, 0.4, p, cfg);
    const auto end = interpolated_flow_segment(f, 0.4, 1.0, mid, cfg);
    const auto direct = interpolated_flow_segment(f, 0.0, 1.0, p, cfg);
    CHECK(end.x[0] == doctest::Approx(direct.x[0]).epsilon(1e-9));
    CHECK(end.tau == doctest::Approx(direct.tau).epsilon(1e-9));
    CHECK(end.xi[0] == doctest::Approx(direct.xi[0]).epsilon(1e-9));

    // Backward segment inverts the forward one.
    const auto back = interpolated_flow_segment(f, 0.4, 0.0, mid, cfg);
    CHECK(back.x[0] == doctest::Approx(p.x[0]).epsilon(1e-9));
    CHECK(back.tau == doctest::Approx(p.tau).epsilon(1e-9));
    CHECK(back.xi[0] == doctest::Approx(p.xi[0]).epsilon(1e-9));
}

TEST_CASE("kappa range is validated") {
    auto f = make_family(perturbed_spec());
    FlowConfig cfg;
    CHECK_THROWS_AS(interpolated_flow(f, 1.5, sample_point(), cfg), config_error);
    CHECK_THROWS_AS(interpolated_flow(f, -0.1, sample_point(), cfg), config_error);
}
