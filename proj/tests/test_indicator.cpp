#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wfqh/microlocal.hpp"

using namespace wfqh;

namespace {

const double kR2 = std::sqrt(2.0);
const double kTauOs = -(kR2 - 1.0);                    // forward characteristic, eta = 1
const double kXiOs = std::sqrt(2.0 * (kR2 - 1.0));

ProbeWindow diag_probe(double s, double y, double w_t, double w_x) {
    ProbeWindow p;
    p.center.t = s;
    p.center.x = {y};
    p.center.tau_hat = kTauOs;
    p.center.xi_hat = {kXiOs};
    p.w_t = w_t;
    p.w_x = w_x;
    return p;
}

SpaceTimeField random_field(const SpatialGrid& g, double t0, double t1, int n_t, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpaceTimeField f = make_field_frame(g, t0, t1, n_t);
    for (auto& row : f.rows)
        for (auto& z : row) z = Cplx{u(rng), u(rng)};
    return f;
}

SpaceTimeField gaussian_field(const SpatialGrid& g, double t0, double t1, int n_t, double sig_t,
                              double sig_x) {
    SpaceTimeField f = make_field_frame(g, t0, t1, n_t);
    for (int k = 0; k < n_t; ++k)
        for (int j = 0; j < g.n; ++j) {
            double t = f.t(k), x = g.x(j);
            f.rows[k][j] = std::exp(-t * t / (2 * sig_t * sig_t) - x * x / (2 * sig_x * sig_x));
        }
    return f;
}

// Same sandwich evaluated by explicit quadrature over every frequency bin,
// skipping bins where psi vanishes. Independent of the fft module.
SpaceTimeField direct_sandwich(const SpaceTimeField& u, const ProbeWindow& probe, double h) {
    int nt = u.n_t, nx = u.grid.n;
    double dt = u.dt(), dx = u.grid.dx();
    double dtau = 2.0 * M_PI / (nt * dt), dxi = 2.0 * M_PI / (nx * dx);
    double ht = std::pow(h, probe.theta);

    std::vector<CVec> v(nt, CVec(nx));
    for (int m = 0; m < nt; ++m)
        for (int j = 0; j < nx; ++j)
            v[m][j] = u.rows[m][j] * chi_window_value(probe, u.t(m), u.grid.x(j));

    struct Bin { double tau, xi; Cplx g; };
    std::vector<Bin> bins;
    for (int p = 0; p < nt; ++p)
        for (int q = 0; q < nx; ++q) {
            double tau = (p - nt / 2) * dtau, xi = (q - nx / 2) * dxi;
            double psi = psi_shell_value(probe, ht * tau, h * xi);
            if (psi == 0.0) continue;
            Cplx acc{0.0, 0.0};
            for (int m = 0; m < nt; ++m)
                for (int j = 0; j < nx; ++j)
                    acc += v[m][j] * std::polar(1.0, -(u.t(m) * tau + u.grid.x(j) * xi));
            bins.push_back({tau, xi, acc * (dt * dx / (2.0 * M_PI)) * psi});
        }

    SpaceTimeField out = make_field_frame(u.grid, u.t0, u.t1, u.n_t);
    for (int m = 0; m < nt; ++m)
        for (int j = 0; j < nx; ++j) {
            Cplx acc{0.0, 0.0};
            for (const Bin& b : bins)
                acc += b.g * std::polar(1.0, u.t(m) * b.tau + u.grid.x(j) * b.xi);
            out.rows[m][j] = acc * (dtau * dxi / (2.0 * M_PI)) *
                             chi_window_value(probe, u.t(m), u.grid.x(j));
        }
    return out;
}

}  // namespace

TEST_CASE("window and shell factors") {
    ProbeWindow p = diag_probe(0.1, 0.3, 0.15, 0.6);

    CHECK(chi_window_value(p, 0.1, 0.3) == 1.0);
    CHECK(chi_window_value(p, 0.25, 0.3) == 0.0);
    CHECK(chi_window_value(p, 0.1, 0.91) == 0.0);
    CHECK(chi_window_value(p, 0.1 + 0.07, 0.3 - 0.2) ==
          doctest::Approx(chi_window_value(p, 0.1 - 0.07, 0.3 + 0.2)).epsilon(1e-15));
    CHECK(chi_window_value(p, 0.16, 0.3) < 1.0);

    // dead below and above the shell, full on the aligned plateau
    CHECK(psi_shell_value(p, 0.49 * kTauOs, 0.49 * kXiOs) == 0.0);
    CHECK(psi_shell_value(p, 2.0 * kTauOs, 2.0 * kXiOs) == 0.0);
    CHECK(psi_shell_value(p, 1.2 * kTauOs, 1.2 * kXiOs) == 1.0);
    CHECK(psi_shell_value(p, -1.2 * kTauOs, -1.2 * kXiOs) == 0.0);
    CHECK(psi_shell_value(p, 1.2 * kXiOs, -1.2 * kTauOs) == 0.0);  // orthogonal direction

    double edge = psi_shell_value(p, 0.55 * kTauOs, 0.55 * kXiOs);
    CHECK(edge > 0.0);
    CHECK(edge < 1.0);
}

TEST_CASE("transform pair round trip and spectral Parseval") {
    SpatialGrid g = make_grid(64, 4.0);
    SpaceTimeField u = random_field(g, -0.3, 0.7, 32, 11);

    // psi == 1, chi == 1 limit of the sandwich: forward then inverse
    SpectralField spec = field_ft2(u);
    SpaceTimeField back = make_field_frame(g, u.t0, u.t1, u.n_t);
    field_ift2_into(spec, back);
    CHECK(field_distance(back, u) < 1e-12 * field_norm(u));

    // norm after the frequency multiplication step matches the weighted
    // spectral norm of what was kept
    ProbeWindow p = diag_probe(0.1, 0.3, 0.15, 0.6);
    double h = 0.5, ht = h * h;
    SpectralField kept = field_ft2(u);
    for (int m = 0; m < kept.n_t; ++m)
        for (int j = 0; j < kept.n_x; ++j)
            kept.rows[m][j] *= psi_shell_value(p, ht * kept.tau(m), h * kept.xi(j));
    SpaceTimeField w = make_field_frame(g, u.t0, u.t1, u.n_t);
    field_ift2_into(kept, w);
    CHECK(std::abs(field_norm(w) - spectral_norm(kept)) < 1e-12 * field_norm(u));
}

TEST_CASE("split cutoff matches the direct quadrature on a coarse grid") {
    SpatialGrid g = make_grid(64, 4.0);
    SpaceTimeField u = random_field(g, -0.3, 0.7, 32, 7);
    ProbeWindow p = diag_probe(0.1, 0.3, 0.15, 0.6);

    // h chosen so several shell bins clear the direction gate on this lattice
    SpaceTimeField fast = apply_quasi_cutoff(u, p, 0.35);
    SpaceTimeField slow = direct_sandwich(u, p, 0.35);
    CHECK(field_distance(fast, slow) < 1e-10 * field_norm(u));
    CHECK(field_norm(fast) > 1e-3);  // the comparison is not between zeros
}

TEST_CASE("bounded map on random fields") {
    SpatialGrid g = make_grid(64, 4.0);
    ProbeWindow p = diag_probe(0.1, 0.3, 0.15, 0.6);
    for (unsigned seed : {1u, 2u, 3u}) {
        SpaceTimeField u = random_field(g, -0.3, 0.7, 32, seed);
        for (double h : {0.08, 0.5, 2.0}) {
            SpaceTimeField out = apply_quasi_cutoff(u, p, h);
            CHECK(field_norm(out) <= field_norm(u) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("plateau mode passes, antipodal mode is blocked") {
    // h small enough that the window's spectral width is well inside the
    // direction cone and the plateau margins
    SpatialGrid g = make_grid(128, 8.0);
    double h = 0.1;
    double tau0 = 1.15 * kTauOs / (h * h), xi0 = 1.15 * kXiOs / h;
    SpaceTimeField u = make_field_frame(g, -1.0, 1.0, 256);
    for (int k = 0; k < u.n_t; ++k)
        for (int j = 0; j < g.n; ++j)
            u.rows[k][j] = std::polar(1.0, tau0 * u.t(k) + xi0 * g.x(j));

    ProbeWindow p = diag_probe(0.0, 0.0, 0.4, 1.5);
    SpaceTimeField chi2u = make_field_frame(g, u.t0, u.t1, u.n_t);
    for (int k = 0; k < u.n_t; ++k)
        for (int j = 0; j < g.n; ++j) {
            double c = chi_window_value(p, u.t(k), g.x(j));
            chi2u.rows[k][j] = c * c * u.rows[k][j];
        }

    // residual deviation is the window's spectral tail past the cone edges
    SpaceTimeField on = apply_quasi_cutoff(u, p, h);
    CHECK(field_distance(on, chi2u) < 0.1 * field_norm(chi2u));

    ProbeWindow anti = p;
    anti.center.tau_hat = -p.center.tau_hat;
    anti.center.xi_hat = {-p.center.xi_hat[0]};
    SpaceTimeField off = apply_quasi_cutoff(u, anti, h);
    CHECK(field_norm(off) < 1e-4 * field_norm(chi2u));
}

TEST_CASE("smooth data filtered to dust at h = 1/32, against the quadrature oracle") {
    // coarse frame keeps the direct quadrature affordable
    SpatialGrid g = make_grid(64, 4.0);
    SpaceTimeField u = gaussian_field(g, -0.3, 0.7, 32, 0.2, 0.6);
    ProbeWindow p = diag_probe(0.1, 0.0, 0.3, 2.0);
    p.center.tau_hat = 0.0;
    p.center.xi_hat = {1.0};

    double h = 1.0 / 32.0;
    SpaceTimeField fast = apply_quasi_cutoff(u, p, h);
    SpaceTimeField slow = direct_sandwich(u, p, h);
    CHECK(field_norm(fast) <= 1e-3 * field_norm(u));
    CHECK(field_distance(fast, slow) < 1e-12 * field_norm(u));

    // full-resolution frame, same decay statement
    SpatialGrid gf = make_grid(256, 6.0);
    SpaceTimeField uf = gaussian_field(gf, -0.75, 0.75, 1024, 0.2, 0.6);
    ProbeWindow pf = diag_probe(0.0, 0.0, 0.3, 2.0);
    CHECK(field_norm(apply_quasi_cutoff(uf, pf, h, 4)) <= 1e-3 * field_norm(uf));
}

TEST_CASE("oscillatory field calibrates the classifier") {
    SpatialGrid g = make_grid(1024, 6.0);
    double h0 = 1.0 / 32.0;
    SpaceTimeField u = make_field_frame(g, -0.5, 0.5, 512);
    for (int k = 0; k < u.n_t; ++k)
        for (int j = 0; j < g.n; ++j) {
            double t = u.t(k), x = g.x(j);
            u.rows[k][j] = bump(t / 0.35) * bump(x / 2.5) *
                           std::polar(1.0, kTauOs * t / (h0 * h0) + kXiOs * x / h0);
        }

    // h_min sits exactly on the window-resolvability boundary 4 dx / w_x
    Vec hs = {0.25, 0.1768, 0.125, 0.0884, 0.0625, 0.0442, 0.03125};

    ProbeWindow on = diag_probe(0.0, 0.0, 0.3, 1.5);
    IndicatorResult ron = wf_indicator(u, on, hs, {}, 4);
    CHECK(ron.h_list.size() == 7);
    CHECK(ron.classification == WfClass::in_wf);
    CHECK(ron.fitted_alpha < -5.0);
    CHECK(ron.norms.back() > 0.1);
    // the norm profile peaks at the scales matching the field's own h0
    std::size_t peak = 0;
    for (std::size_t i = 1; i < ron.norms.size(); ++i)
        if (ron.norms[i] > ron.norms[peak]) peak = i;
    CHECK(peak >= 5);

    ProbeWindow off = on;
    off.center.tau_hat = -on.center.tau_hat;
    IndicatorResult roff = wf_indicator(u, off, hs, {}, 4);
    CHECK(roff.classification == WfClass::not_in_wf);
    CHECK(roff.norms.back() < roff.thresholds.floor);
    CHECK(ron.fitted_alpha < roff.fitted_alpha - 1.0);
}

TEST_CASE("Schwartz data reads empty at twenty random probes") {
    SpatialGrid g = make_grid(1024, 8.0);
    SpaceTimeField u = gaussian_field(g, -0.5, 0.5, 512, 0.2, 0.6);

    Vec hs;
    for (double h = 0.3; h > 0.052; h /= kR2) hs.push_back(h);
    REQUIRE(hs.size() == 6);

    ProbeWindow p = diag_probe(0.0, 0.0, 0.3, 2.0);

    // axis-aligned directions are the least favorable; pin them explicitly
    p.center.tau_hat = 0.0;
    p.center.xi_hat = {1.0};
    CHECK(wf_indicator(u, p, hs, {}, 4).classification == WfClass::not_in_wf);
    p.center.tau_hat = 1.0;
    p.center.xi_hat = {0.0};
    CHECK(wf_indicator(u, p, hs, {}, 4).classification == WfClass::not_in_wf);

    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> us(-0.15, 0.15), uy(-1.0, 1.0),
        uphi(0.0, 2.0 * M_PI);
    for (int i = 0; i < 20; ++i) {
        p.center.t = us(rng);
        p.center.x = {uy(rng)};
        double phi = uphi(rng);
        p.center.tau_hat = std::cos(phi);
        p.center.xi_hat = {std::sin(phi)};
        IndicatorResult r = wf_indicator(u, p, hs, {}, 4);
        CAPTURE(i);
        CAPTURE(phi);
        CHECK(r.classification == WfClass::not_in_wf);
    }
}

TEST_CASE("resolvability gating") {
    SpatialGrid coarse = make_grid(64, 4.0);
    SpaceTimeField u = random_field(coarse, -0.3, 0.7, 32, 5);
    ProbeWindow p = diag_probe(0.1, 0.3, 0.15, 0.6);

    // window too coarse for every requested h
    CHECK_THROWS_AS(wf_indicator(u, p, {0.3, 0.2, 0.1}), config_error);
    try {
        wf_indicator(u, p, {0.3, 0.2, 0.1});
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("resolvable") != std::string::npos);
    }

    // partial validity: the unresolvable tail is dropped from the result
    SpatialGrid g = make_grid(256, 6.0);
    SpaceTimeField v = random_field(g, -0.5, 0.5, 64, 6);
    ProbeWindow q = diag_probe(0.0, 0.0, 0.3, 2.0);
    IndicatorResult r = wf_indicator(v, q, {0.3, 0.2, 0.12, 0.09, 0.05});
    CHECK(r.h_list.size() == 3);
    CHECK(r.h_list.back() == 0.12);
    CHECK(r.norms.size() == 3);

    CHECK_THROWS_AS(wf_indicator(v, q, {0.3, 0.2}), config_error);
    CHECK_THROWS_AS(wf_indicator(v, q, {0.3, 0.3, 0.2}), config_error);
    CHECK_THROWS_AS(wf_indicator(v, q, {0.3, 0.2, -0.1}), config_error);

    ProbeWindow outlier = diag_probe(0.45, 0.0, 0.3, 2.0);  // sticks past t1 = 0.5
    CHECK_THROWS_AS(apply_quasi_cutoff(v, outlier, 0.25), config_error);
    ProbeWindow skew = q;
    skew.center.tau_hat = 0.5;
    skew.center.xi_hat = {0.5};
    CHECK_THROWS_AS(apply_quasi_cutoff(v, skew, 0.25), config_error);
    ProbeWindow flat = q;
    flat.w_x = 0.0;
    CHECK_THROWS_AS(apply_quasi_cutoff(v, flat, 0.25), config_error);
    ProbeWindow badtheta = q;
    badtheta.theta = 0.0;
    CHECK_THROWS_AS(apply_quasi_cutoff(v, badtheta, 0.25), config_error);
}

TEST_CASE("characteristic probe pair") {
    PerturbationField os = make_family(FamilySpec{});
    auto [on, off] = characteristic_probe_pair(os, 0.4, {0.2}, {1.0});

    CHECK(on.center.t == 0.4);
    CHECK(on.center.x[0] == 0.2);
    CHECK(on.center.tau_hat == doctest::Approx(-0.4142136).epsilon(1e-7));
    CHECK(off.center.tau_hat == doctest::Approx(+0.4142136).epsilon(1e-7));
    CHECK(off.center.xi_hat[0] == on.center.xi_hat[0]);

    DirectionPoint ref = pi_os_map(0.4, {0.2}, {1.0});
    CHECK(std::abs(on.center.tau_hat - ref.tau_hat) < 1e-14);
    CHECK(std::abs(on.center.xi_hat[0] - ref.xi_hat[0]) < 1e-14);

    for (const ProbeWindow* p : {&on, &off}) {
        double r2 = p->center.tau_hat * p->center.tau_hat +
                    p->center.xi_hat[0] * p->center.xi_hat[0];
        CHECK(std::abs(r2 - 1.0) < 1e-12);
    }
    double gap = std::hypot(on.center.tau_hat - off.center.tau_hat,
                            on.center.xi_hat[0] - off.center.xi_hat[0]);
    CHECK(gap >= 0.8);

    // direction is scale invariant in eta
    auto [on2, off2] = characteristic_probe_pair(os, 0.4, {0.2}, {2.0});
    CHECK(std::abs(on2.center.tau_hat - on.center.tau_hat) < 1e-14);
    CHECK(std::abs(on2.center.xi_hat[0] - on.center.xi_hat[0]) < 1e-14);

    // widths are copied into both probes
    ProbeWindow widths;
    widths.w_t = 0.25;
    widths.w_x = 1.1;
    widths.freq_width = 0.2;
    auto [onw, offw] = characteristic_probe_pair(os, 0.4, {0.2}, {1.0}, widths);
    CHECK(onw.w_t == 0.25);
    CHECK(offw.w_x == 1.1);
    CHECK(offw.freq_width == 0.2);

    // a nontrivial field bends the direction away from the unperturbed one
    FamilySpec fs;
    fs.c_a = 0.3;
    fs.epsilon = 0.5;
    fs.t_shape = TimeShape::gaussian;
    PerturbationField pert = make_family(fs);
    auto [onp, offp] = characteristic_probe_pair(pert, 0.3, {0.1}, {1.0});
    double rp = onp.center.tau_hat * onp.center.tau_hat +
                onp.center.xi_hat[0] * onp.center.xi_hat[0];
    CHECK(std::abs(rp - 1.0) < 1e-12);
    CHECK(std::abs(onp.center.tau_hat - on.center.tau_hat) > 1e-6);

    CHECK_THROWS_AS(characteristic_probe_pair(os, 0.4, {0.2}, {0.0}), config_error);
}
