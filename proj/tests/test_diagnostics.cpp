#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "jinxin/diagnostics.hpp"

using namespace jinxin;

namespace {

double max_z_norm(const std::vector<SpectralField>& z) {
    double worst = 0.0;
    for (const SpectralField& f : z) worst = std::max(worst, l2_norm(f));
    return worst;
}

RelaxState random_state(const Grid& g, int d, std::uint64_t seed, int j_lo, int j_hi) {
    RelaxState s;
    s.m = random_perturbation(seed, 1.0, j_lo, j_hi, g);
    for (int i = 0; i < d; ++i)
        s.w.push_back(random_perturbation(seed + 31u * std::uint64_t(i + 1), 0.7, j_lo, j_hi, g));
    return s;
}

}  // namespace

TEST_CASE("effective mode vanishes on equilibrium states") {
    Grid g(2, 1, 16);
    ModelParams P(SymbolParams(0.3, {1.0, 0.7}), 1, 0.5, 0.25, FluxSpec::quadratic({0.4, -0.1}));

    RelaxState zero;
    zero.m = SpectralField(g);
    for (int i = 0; i < 2; ++i) zero.w.emplace_back(g);
    CHECK(max_z_norm(effective_mode(zero, P)) == 0.0);

    RealField u0(g);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            u0.a[std::size_t(i * 16 + j)] =
                0.5 + 0.04 * std::sin(g.x(i)) * std::cos(g.x(j)) + 0.02 * std::cos(2.0 * g.x(j));
    CHECK(max_z_norm(effective_mode(well_prepared_init(u0, P), P)) < 1e-12);
}

TEST_CASE("rescaled and unscaled damped-mode formulas agree") {
    Grid g(2, 1, 16);
    ModelParams P(SymbolParams(0.35, {1.2, 0.8}), 1, 0.6, 0.3, FluxSpec::quadratic({0.5, 0.2}));
    RelaxState s = random_state(g, 2, 5u, 0, 2);

    auto z = effective_mode(s, P);
    FieldSnapshot snap = unscale(s, P);
    auto Z = effective_mode_unscaled(snap.u, snap.v, P);
    double scale = std::max(1.0, max_z_norm(z));
    for (int i = 0; i < 2; ++i) CHECK(l2_norm(diff(z[std::size_t(i)], Z[std::size_t(i)])) / scale < 1e-12);
}

TEST_CASE("z tracks -eps dw/dt along trajectories") {
    Grid g(1, 1, 64);
    ModelParams P(SymbolParams(0.5, {1.0}), 1, 0.5, 0.25, FluxSpec::quadratic({1.0}));
    RealField u0(g);
    for (int i = 0; i < g.N; ++i) u0.a[std::size_t(i)] = 0.5 + 0.05 * std::sin(g.x(i));
    RelaxState s = well_prepared_init(u0, P);
    axpy(s.w[0], 0.3, random_perturbation(9u, 1.0, 0, 3, g));  // push off equilibrium

    const double h = 1e-3;
    RelaxStepper st(g, P, h, Scheme::etd);
    RelaxState s1 = s, s2 = s;
    st.step(s1);
    st.step(s2);
    st.step(s2);

    auto z = effective_mode(s, P);
    // one-sided second-order difference: w'(0) = (-3 w0 + 4 w1 - w2) / (2h)
    SpectralField fd = s.w[0];
    for (std::size_t k = 0; k < fd.a.size(); ++k)
        fd.a[k] = -P.sym.eps * (-3.0 * s.w[0].a[k] + 4.0 * s1.w[0].a[k] - s2.w[0].a[k]) / (2.0 * h);
    CHECK(l2_norm(diff(fd, z[0])) / l2_norm(z[0]) < 1e-4);
}

TEST_CASE("well-prepared states unscale onto the gradient-flux manifold") {
    Grid g(1, 1, 64);
    ModelParams P(SymbolParams(0.25, {1.3}), 1, 0.5, 0.25, FluxSpec::quadratic({0.8}));
    RealField u0(g);
    for (int i = 0; i < g.N; ++i)
        u0.a[std::size_t(i)] = 0.5 + 0.03 * std::sin(g.x(i)) + 0.02 * std::cos(3.0 * g.x(i));
    FieldSnapshot snap = unscale(well_prepared_init(u0, P), P);
    auto vstar = darcy_reconstruct(snap.u, P);
    CHECK(l2_norm(diff(snap.v[0], vstar[0])) < 1e-12);
    CHECK(std::abs(mean(snap.u, 0) - cplx(0.5)) < 1e-14);
}

TEST_CASE("lyapunov with eta = 0 is the plain weighted block energy") {
    Grid g(1, 1, 64);
    ModelParams P(SymbolParams(0.2, {1.7}), 1, 0.0, 0.0, FluxSpec::zero());
    DyadicFilter f = build_partition(g);
    RelaxState s = random_state(g, 1, 12u, 0, 4);
    for (int j = f.j_min; j <= f.j_max; ++j) {
        LyapunovSample ls = lyapunov(s, j, 0.0, 2, P, f);
        double em = l2_norm(dyadic_block(s.m, j, f));
        double ew = l2_norm(dyadic_block(s.w[0], j, f));
        CHECK(ls.L2 == Catch::Approx(0.5 * em * em + 0.5 * ew * ew / 1.7).margin(1e-15));
        CHECK(ls.H2 == Catch::Approx(ew * ew / (1.7 * 0.04)).epsilon(1e-12));
        CHECK(ls.H2_scaled == Catch::Approx(ls.H2 / 0.04).epsilon(1e-12));
        CHECK(ls.in_range == (j >= 1));
    }
}

TEST_CASE("unit-weight equivalence constants collapse to 1/2 at eta 0") {
    Grid g(1, 1, 128);
    ModelParams P(SymbolParams(0.25, {1.0}), 1, 0.0, 0.0, FluxSpec::zero());
    DyadicFilter f = build_partition(g);
    auto [c1, c2] = measured_equivalence(g, P, f, threshold_Jeps(0.25, 2), 0.0, 4, 7u);
    CHECK(c1 == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(c2 == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("calibrated eta keeps the equivalence spread bounded across eps") {
    Grid g(1, 1, 256);
    DyadicFilter f = build_partition(g);
    ModelParams P0(SymbolParams(0.25, {1.4}), 1, 0.0, 0.0, FluxSpec::zero());
    double eta = calibrate_eta(g, P0, f, threshold_Jeps(0.25, 2), 6, 77u);
    REQUIRE(eta > 0.0);
    for (int q = 2; q <= 8; ++q) {
        double eps = std::ldexp(1.0, -q);
        ModelParams P(SymbolParams(eps, {1.4}), 1, 0.0, 0.0, FluxSpec::zero());
        int J = threshold_Jeps(eps, 2);
        auto [c1, c2] = measured_equivalence(g, P, f, J, eta, 6, 77u);
        CHECK(c1 > 0.0);
        CHECK(c2 / c1 <= 4.0);
    }
}

TEST_CASE("high-frequency lyapunov blocks decay on relaxation trajectories") {
    Grid g(1, 1, 128);
    const double eps = 0.125;
    ModelParams P(SymbolParams(eps, {1.0}), 1, 0.0, 0.0, FluxSpec::zero());
    DyadicFilter f = build_partition(g);
    const int J = threshold_Jeps(eps, 0);  // k0 = 0: blocks at 2^j ~ 1/eps
    RelaxState s = random_state(g, 1, 21u, J - 1, f.j_max);
    // half the calibrated weight: the calibration marks the measured equivalence
    // edge, and trajectory states align w with -grad m more than random ones
    double eta = 0.5 * calibrate_eta(g, P, f, J, 6, 3u);
    REQUIRE(eta > 0.0);

    const double dt = eps * eps / 4.0;
    RelaxStepper st(g, P, dt, Scheme::etd);
    std::vector<double> ts, Lj;
    for (int k = 0; k <= 16; ++k) {
        LyapunovSample ls = lyapunov(s, J - 1, eta, J, P, f);
        REQUIRE(ls.L2 >= 0.0);
        ts.push_back(std::exp(s.t));  // reuse rate_fit: log(exp(t)) = t
        Lj.push_back(ls.L2);
        st.step(s);
    }
    RateFit fit = rate_fit(ts, Lj);
    // d/dt log L^2 = -2 kappa / eps^2 with kappa well above the acceptance floor
    double kappa = -0.5 * fit.slope * eps * eps;
    CHECK(kappa > 0.05);
    // exponential envelope at the floor rate
    double T = ts.size() > 1 ? s.t : 0.0;
    CHECK(Lj.back() <= Lj.front() * std::exp(-2.0 * 0.05 * T / (eps * eps)));
}

TEST_CASE("error norms vanish for identical trajectories and obey the mode oracle") {
    Grid g(2, 1, 16);
    DyadicFilter f = build_partition(g);
    const double T = 2.0;

    // single cos mode at |xi| = 2 in u, another at |xi| = 1 in v[0], constant in time
    SpectralField um(g), vm(g);
    um.comp(0)[std::size_t(2 * 16)] = 0.5;  // k = (2, 0)
    um.comp(0)[std::size_t(14 * 16)] = 0.5;
    vm.comp(0)[1] = 0.5;  // k = (0, 1)
    vm.comp(0)[15] = 0.5;
    const double Au = l2_norm(um), Av = l2_norm(vm);

    Trajectory a, b;
    for (double t : {0.0, 0.5 * T, T}) {
        FieldSnapshot fa{t, um, {vm, SpectralField(g)}};
        FieldSnapshot fb{t, SpectralField(g), {SpectralField(g), SpectralField(g)}};
        a.push_back(fa);
        b.push_back(fb);
    }

    ErrorNormReport same = error_norms(a, a, f, 2, {0.5});
    CHECK(same.rate.total() == 0.0);
    CHECK(same.sigma[0].second == 0.0);

    ErrorNormReport rep = error_norms(a, b, f, 2, {0.5, 1.0});
    // u blocks: phi(2) at j = 0, phi(1) at j = 1; v blocks: phi(2) at j = -1, phi(1) at j = 0
    const double p1 = lp_phi(1.0), p2 = lp_phi(2.0);
    CHECK(rep.rate.u_l1 == Catch::Approx(T * Au * (p2 + 2.0 * p1)).epsilon(1e-12));
    CHECK(rep.rate.u_lt2 == Catch::Approx(std::sqrt(T) * Au * (p2 + 2.0 * p1)).epsilon(1e-12));
    CHECK(rep.rate.u_linf ==
          Catch::Approx(Au * (p2 + 0.5 * p1) + Au * (p2 + p1)).epsilon(1e-12));
    CHECK(rep.rate.v_l1 == Catch::Approx(T * Av * (p2 + p1)).epsilon(1e-12));
    // sigma = 1: s = 0 for u (sup in t) and v (L1 in t)
    CHECK(rep.sigma[1].second ==
          Catch::Approx(Au * (p2 + p1) + T * Av * (p2 + p1)).epsilon(1e-12));

    Trajectory shifted = a;
    shifted[1].t = 0.4 * T;
    CHECK_THROWS_AS(error_series(a, shifted, f, 2), std::invalid_argument);
    Trajectory shorter(a.begin(), a.begin() + 2);
    CHECK_THROWS_AS(error_series(a, shorter, f, 2), std::invalid_argument);
}

TEST_CASE("rate_fit recovers synthetic slopes") {
    std::vector<double> eps, e1, eh, noisy, scaled;
    for (int q = 2; q <= 7; ++q) {
        double e = std::ldexp(1.0, -q);
        eps.push_back(e);
        e1.push_back(e);
        eh.push_back(std::sqrt(e));
        noisy.push_back(3.0 * e * (1.0 + 0.05 * (q % 2 == 0 ? 1.0 : -1.0)));
        scaled.push_back(42.0 * e);
    }
    RateFit f1 = rate_fit(eps, e1);
    CHECK(f1.slope == Catch::Approx(1.0).margin(1e-12));
    CHECK(f1.r2 == Catch::Approx(1.0).margin(1e-12));
    CHECK(rate_fit(eps, eh).slope == Catch::Approx(0.5).margin(1e-12));
    RateFit fn = rate_fit(eps, noisy);
    CHECK(std::abs(fn.slope - 1.0) < 0.05);
    CHECK(rate_fit(eps, scaled).slope == Catch::Approx(f1.slope).margin(1e-12));

    CHECK_THROWS_AS(rate_fit({0.1, 0.2}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(rate_fit({0.1, 0.2, 0.3}, {1.0, -2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(rate_fit({0.1, 0.1, 0.1}, {1.0, 2.0, 3.0}), std::invalid_argument);
}
