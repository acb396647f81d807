#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "benj/functionals.hpp"
#include "benj/spectral.hpp"

using namespace benj;

namespace {

Field localized(const Grid& g) {
    Vec v = (-(g.x * g.x) / 10.0).exp() * (1.0 + 0.2 * (0.5 * g.x).cos());
    return Field(g, v);
}

Field shifted(const Field& u, int cells) {
    Vec v(u.grid.n);
    for (int i = 0; i < u.grid.n; ++i) v[i] = u.values[(i + cells) % u.grid.n];
    return Field(u.grid, v);
}

}  // namespace

TEST_CASE("parameter structs validate their ranges") {
    CHECK_THROWS(WaveParams(0.0, 3.0));
    CHECK_THROWS(WaveParams(-1.0, 3.0));
    CHECK_THROWS(WaveParams(1.0, 2.0));
    CHECK_NOTHROW(WaveParams(0.5, 10.0));
}

TEST_CASE("physical parameters map to the normalized wave speed") {
    CHECK(physical_to_normalized({1.0, 1.0}) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(physical_to_normalized({0.5, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(physical_to_normalized({2.5, 2.0}) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK_THROWS(physical_to_normalized({1.0, 2.0}));   // speed at the edge: no wave
    CHECK_THROWS(physical_to_normalized({0.1, 2.0}));
    CHECK_THROWS(physical_to_normalized({1.0, 0.0}));
}

TEST_CASE("general and cubic speed formulas agree identically") {
    for (Real alpha : {0.1, 0.7, 1.0, 3.0})
        for (Real ratio : {0.2, 1.0, 5.0})
            CHECK(omega_from_alpha(alpha, ratio, 3.0) ==
                  doctest::Approx(omega_from_alpha_cubic(alpha, ratio)).epsilon(1e-15));
}

TEST_CASE("power integral is signed for the quadratic case only") {
    const Grid g = make_grid(256, EIGEN_PI);
    Field c(g, g.x.cos().eval());
    CHECK(std::abs(nonlinear_power_integral(c, 3.0)) < 1e-12);  // cos^3 integrates to zero
    CHECK(nonlinear_power_integral(c, 4.0) > 0.5);              // |cos|^4 does not
    Field m(g, (-g.x.cos()).eval());
    CHECK(nonlinear_power_integral(m, 3.0) ==
          doctest::Approx(-nonlinear_power_integral(c, 3.0)).epsilon(1e-12));
}

TEST_CASE("variational identities evaluated on a pure cosine have closed forms") {
    // For u = cos(x) on [-pi, pi): each quadratic functional equals pi and the
    // cubic power vanishes, so r1 = omega*pi and r2 = -omega*pi.
    const Grid g = make_grid(256, EIGEN_PI);
    Field c(g, g.x.cos().eval());
    const Real omega = 2.5;
    const PohozaevResiduals pr = pohozaev_residuals(c, WaveParams(omega, 3.0));
    CHECK(pr.r1 == doctest::Approx(omega * EIGEN_PI).epsilon(1e-12));
    CHECK(pr.r2 == doctest::Approx(-omega * EIGEN_PI).epsilon(1e-12));
}

TEST_CASE("relative residual normalizes by the power integral") {
    const Grid g = make_grid(256, 20.0);
    const Field u = localized(g);
    const PohozaevResiduals pr = pohozaev_residuals(u, WaveParams(1.0, 4.0));
    const Real P = nonlinear_power_integral(u, 4.0);
    CHECK(pr.relative ==
          doctest::Approx(std::max(std::abs(pr.r1), std::abs(pr.r2)) / std::abs(P)));
}

TEST_CASE("quotients are scale and translation invariant") {
    const Grid g = make_grid(512, 40.0);
    const Field u = localized(g);
    const Real j0 = gn_quotient(u, 0.8, 3.0);
    Field u2(g, (2.5 * u.values).eval());
    CHECK(gn_quotient(u2, 0.8, 3.0) == doctest::Approx(j0).epsilon(1e-12));
    CHECK(gn_quotient(shifted(u, 37), 0.8, 3.0) == doctest::Approx(j0).epsilon(1e-10));

    const Real s0 = sobolev_quotient(u, 1.2, 4.0);
    Field u3(g, (-3.0 * u.values).eval());
    CHECK(sobolev_quotient(u3, 1.2, 4.0) == doctest::Approx(s0).epsilon(1e-12));
    CHECK(sobolev_quotient(shifted(u, 101), 1.2, 4.0) == doctest::Approx(s0).epsilon(1e-10));
}

TEST_CASE("quotients validate their parameter ranges") {
    const Grid g = make_grid(256, 20.0);
    const Field u = localized(g);
    CHECK_THROWS(gn_quotient(u, -1.0, 3.0));
    CHECK_THROWS(gn_quotient(u, 1.0, 7.0));   // above the solvable window
    CHECK_THROWS(sobolev_quotient(u, 0.0, 3.0));
    CHECK_THROWS(sobolev_quotient(u, 1.0, 1.5));
    Field z(g, Vec::Zero(g.n).eval());
    CHECK_THROWS(gn_quotient(z, 1.0, 3.0));
}

TEST_CASE("narrow-band data drives the p=2 embedding quotient to 1/omega") {
    const Grid g = make_grid(2048, 400.0 * EIGEN_PI);
    const Real omega = 1.7;
    const Real q1 = sobolev_quotient(spectral_bump(g, 0.1), omega, 2.0);
    const Real q2 = sobolev_quotient(spectral_bump(g, 0.05), omega, 2.0);
    CHECK(q1 < 1.0 / omega);
    CHECK(q2 < 1.0 / omega);
    // the gap closes like eps^2
    CHECK((1.0 / omega - q2) / (1.0 / omega - q1) == doctest::Approx(0.25).epsilon(0.2));
}

TEST_CASE("Hamiltonian gradient matches the steady equation's left side") {
    const Grid g = make_grid(512, 40.0);
    const WaveParams params(1.3, 3.0);
    const Field u = localized(g);
    const Field v = Field(g, ((-(g.x * g.x) / 7.0).exp() * (0.9 * g.x).sin()).eval());
    const Real h = 1e-6;
    auto energy = [&](const Field& w) {
        const Invariants inv = invariants(w, params);
        return inv.hamiltonian;
    };
    Field up(g, (u.values + h * v.values).eval());
    Field um(g, (u.values - h * v.values).eval());
    const Real directional = (energy(up) - energy(um)) / (2.0 * h);
    const Field Su = apply_symbol(u, SymbolKind::ShiftedSquare);
    const Vec gradient = Su.values + params.omega * u.values -
                         nonlinearity_pointwise(u.values, params.p);
    const Real inner_product = (gradient * v.values).sum() * g.dx;
    CHECK(directional == doctest::Approx(inner_product).epsilon(1e-6));
}

TEST_CASE("mass and l2 invariants are plain integrals") {
    const Grid g = make_grid(256, 20.0);
    const Field u = localized(g);
    const Invariants inv = invariants(u, WaveParams(1.0, 3.0));
    CHECK(inv.mass == doctest::Approx(integrate(u)).epsilon(1e-14));
    CHECK(inv.l2 == doctest::Approx(norm_l2(u) * norm_l2(u)).epsilon(1e-14));
}

TEST_CASE("instability margin closed form") {
    CHECK(instability_margin(10.0, 10.0) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(instability_margin(1.0, 3.0) ==
          doctest::Approx(3.0 / 4 + 4.0 / 3 - 1.0 - 2.5).epsilon(1e-14));
    CHECK(instability_margin(1.0, 3.0) < 0.0);
    // the margin increases in omega and is monotone across these powers
    CHECK(instability_margin(10.0, 10.0) > instability_margin(4.0, 10.0));
    CHECK_THROWS(instability_margin(0.0, 3.0));
    CHECK_THROWS(instability_margin(1.0, 12.0));
}

TEST_CASE("quadratic form splits into seminorm plus weighted mass") {
    const Grid g = make_grid(256, 20.0);
    const Field u = localized(g);
    const Real omega = 0.9;
    CHECK(quad_form(u, omega) ==
          doctest::Approx(seminorm_sq(u, SymbolKind::ShiftedSquare) +
                          omega * norm_l2(u) * norm_l2(u)).epsilon(1e-13));
}
