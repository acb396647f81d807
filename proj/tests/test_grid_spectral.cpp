#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "benj/grid.hpp"
#include "benj/spectral.hpp"

using namespace benj;

namespace {

Field smooth_sample(const Grid& g) {
    Vec v = (-(g.x * g.x) / 8.0).exp() * (1.0 + 0.3 * (0.7 * g.x).sin());
    return Field(g, v);
}

}  // namespace

TEST_CASE("grid construction validates its arguments") {
    CHECK_THROWS(make_grid(0, 10.0));
    CHECK_THROWS(make_grid(48, 10.0));   // not a power of two
    CHECK_THROWS(make_grid(4, 10.0));    // too small
    CHECK_THROWS(make_grid(64, -1.0));
    const Grid g = make_grid(64, 10.0);
    CHECK(g.n == 64);
    CHECK(g.dx == doctest::Approx(20.0 / 64).epsilon(1e-15));
    CHECK(g.x[0] == doctest::Approx(-10.0));
    CHECK(g.x[32] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.nyquist_index() == 32);
}

TEST_CASE("frequency layout follows FFT ordering") {
    const Grid g = make_grid(16, EIGEN_PI);
    CHECK(g.xi[0] == 0.0);
    CHECK(g.xi[1] == doctest::Approx(1.0));
    CHECK(g.xi[15] == doctest::Approx(-1.0));
    CHECK(g.xi[8] == doctest::Approx(-8.0));  // Nyquist carries the negative sign
}

TEST_CASE("field constructor rejects wrong sizes and non-finite entries") {
    const Grid g = make_grid(64, 10.0);
    Vec bad = Vec::Zero(32);
    CHECK_THROWS(Field(g, bad));
    Vec nan = Vec::Zero(64);
    nan[3] = std::nan("");
    CHECK_THROWS(Field(g, nan));
}

TEST_CASE("transform round trip is lossless") {
    const Grid g = make_grid(256, 20.0);
    SpectralWorkspace ws(g);
    const Field u = smooth_sample(g);
    const Vec back = ws.from_hat(ws.to_hat(u.values));
    CHECK((back - u.values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("Plancherel: the physical transform preserves the l2 integral") {
    const Grid g = make_grid(256, 20.0);
    const Field u = smooth_sample(g);
    const Real phys = (u.values * u.values).sum() * g.dx;
    const CVec uh = transform(u);
    const Real dxi = EIGEN_PI / g.half_length;
    const Real spec = uh.array().abs2().sum() * dxi;
    CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
}

TEST_CASE("derivative of a pure grid mode is exact") {
    const Grid g = make_grid(128, EIGEN_PI);
    const Real k = 5.0;  // integer mode on a pi-length half-domain
    Field u(g, (k * g.x).sin().eval());
    const Field du = derivative(u);
    const Vec expect = k * (k * g.x).cos();
    CHECK((du.values - expect).abs().maxCoeff() < 1e-11);
}

TEST_CASE("Hilbert transform squares to minus the identity on mean-free data") {
    const Grid g = make_grid(256, 20.0);
    SpectralWorkspace ws(g);
    Field u = smooth_sample(g);
    CVec uh = ws.to_hat(u.values);
    uh[0] = 0.0;                       // drop the mean
    uh[g.nyquist_index()] = 0.0;       // odd symbols vanish there anyway
    const Vec v = ws.from_hat(uh);
    const CVec h = symbol_values(g, SymbolKind::Hilbert);
    const Vec hhv = ws.from_hat((h.array() * ws.to_hat(ws.from_hat((h.array() * ws.to_hat(v).array()).matrix())).array()).matrix());
    CHECK((hhv + v).abs().maxCoeff() < 1e-12 * v.abs().maxCoeff());
}

TEST_CASE("Zygmund operator equals Hilbert of the derivative") {
    const Grid g = make_grid(256, 20.0);
    SpectralWorkspace ws(g);
    const Field u = smooth_sample(g);
    const CVec d = symbol_values(g, SymbolKind::Zygmund);
    const Vec lhs = ws.from_hat((d.array() * ws.to_hat(u.values).array()).matrix());
    const CVec h = symbol_values(g, SymbolKind::Hilbert);
    const Vec rhs = ws.from_hat((h.array() * ws.to_hat(derivative(u).values).array()).matrix());
    CHECK((lhs - rhs).abs().maxCoeff() < 1e-11);
}

TEST_CASE("resolvent symbol inverts the shifted square plus alpha") {
    const Grid g = make_grid(256, 20.0);
    SpectralWorkspace ws(g);
    const Real alpha = 0.7;
    const Field u = smooth_sample(g);
    const CVec s = symbol_values(g, SymbolKind::ShiftedSquare);
    const CVec r = symbol_values(g, SymbolKind::Resolvent, alpha);
    CVec prod = ((s.array() + alpha) * r.array()).matrix();
    const Vec back = ws.from_hat((prod.array() * ws.to_hat(u.values).array()).matrix());
    CHECK((back - u.values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("Green's function inverts the operator against a discrete delta") {
    const Grid g = make_grid(512, 40.0);
    SpectralWorkspace ws(g);
    const Real omega = 1.3;
    const Field G = greens_function(g, omega);
    CHECK(G.values[g.n / 2] == doctest::Approx(G.values.maxCoeff()));  // peak at x = 0
    Real mirror_defect = 0;  // G(x) = G(-x) on the paired nodes
    for (int i = 1; i < g.n; ++i)
        mirror_defect = std::max(mirror_defect, std::abs(G.values[i] - G.values[g.n - i]));
    CHECK(mirror_defect < 1e-10 * G.values.abs().maxCoeff());
    const CVec s = symbol_values(g, SymbolKind::ShiftedSquare);
    const Vec applied = ws.from_hat(((s.array() + omega) * ws.to_hat(G.values).array()).matrix());
    Vec delta = Vec::Zero(g.n);
    // flat transform == grid delta of height sqrt(2 pi)/dx at x = 0
    delta[g.n / 2] = std::sqrt(2.0 * EIGEN_PI) / g.dx;
    CHECK((applied - delta).abs().maxCoeff() < 1e-8 * delta.abs().maxCoeff());
}

TEST_CASE("Green's function tail constant stabilizes under domain doubling") {
    auto tail_at = [](Real L) {
        const Grid g = make_grid(4096, L);
        const Field G = greens_function(g, 1.0);
        // median of x^2 G over the tail window [L/4, L/2]
        std::vector<Real> vals;
        for (int i = 0; i < g.n; ++i) {
            const Real ax = std::abs(g.x[i]);
            if (ax >= L / 4 && ax <= L / 2) vals.push_back(g.x[i] * g.x[i] * G.values[i]);
        }
        std::sort(vals.begin(), vals.end());
        return vals[vals.size() / 2];
    };
    const Real t1 = tail_at(100.0 * EIGEN_PI);
    const Real t2 = tail_at(200.0 * EIGEN_PI);
    CHECK(std::abs(t2 - t1) / std::abs(t1) < 0.02);
}

TEST_CASE("spectral bump concentrates near |xi| = 1 and validates eps") {
    const Grid g = make_grid(1024, 100.0 * EIGEN_PI);
    CHECK_THROWS(spectral_bump(g, 0.3));      // eps too large
    CHECK_THROWS(spectral_bump(g, -0.1));
    const Real eps = 0.05;
    const Field b = spectral_bump(g, eps);
    SpectralWorkspace ws(g);
    const CVec bh = ws.to_hat(b.values);
    Real carrier = 0, low = 0, total = 0;
    for (int k = 0; k < g.n; ++k) {
        const Real m2 = std::norm(bh[k]);
        total += m2;
        if (std::abs(std::abs(g.xi[k]) - 1.0) <= eps + 1e-12) carrier += m2;
        if (std::abs(g.xi[k]) <= eps + 1e-12) low += m2;
    }
    CHECK((carrier + low) / total > 1.0 - 1e-12);  // nothing outside the three lobes
    CHECK(low / total < 10.0 * eps * eps);         // the low lobe is the eps-weighted one
}

TEST_CASE("quadratic-form mass of the bump family scales like eps cubed") {
    const Grid g = make_grid(2048, 400.0 * EIGEN_PI);
    SpectralWorkspace ws(g);
    auto shifted_mass = [&](Real eps) {
        const Field b = spectral_bump(g, eps);
        return seminorm_sq(b, SymbolKind::ShiftedSquare) / (norm_l2(b) * norm_l2(b));
    };
    const Real ratio = shifted_mass(0.1) / shifted_mass(0.05);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));  // ||(D-1)u||^2/||u||^2 ~ eps^2
}

TEST_CASE("dealias padding covers every polynomial power") {
    CHECK(dealias_pad_factor(3.0) == 2);
    CHECK(dealias_pad_factor(4.0) == 2);
    CHECK(dealias_pad_factor(6.0) == 3);
    CHECK(dealias_pad_factor(8.0) == 4);
    CHECK(dealias_pad_factor(10.0) == 5);
    CHECK(dealias_pad_factor(3.5) == 1);
    CHECK(dealias_pad_factor(5.0) == 1);
}

TEST_CASE("dealiased square agrees with the pointwise square on band-limited data") {
    const Grid g = make_grid(256, 20.0);
    SpectralWorkspace ws(g);
    // keep the band below n/6 so the pointwise square is alias-free too
    CVec uh = CVec::Zero(g.n);
    for (int k = 1; k <= 20; ++k) {
        uh[k] = Complex(1.0 / (1 + k), 0.5 / (1 + k * k));
        uh[g.n - k] = std::conj(uh[k]);
    }
    const Vec u = ws.from_hat(uh);
    Field f(g, u);
    const Field dealiased = apply_nonlinearity(f, 3.0);  // p = 3: the signed square
    CHECK((dealiased.values - u * u).abs().maxCoeff() < 1e-13 * (u * u).abs().maxCoeff());
}

TEST_CASE("cubic-power nonlinearity is the signed square, higher powers keep the modulus") {
    const Grid g = make_grid(64, 10.0);
    Vec v = (-(g.x * g.x)).exp() * g.x.sin() - 0.4 * (-(g.x * g.x) / 2.0).exp();
    const Vec n3 = nonlinearity_pointwise(v, 3.0);
    CHECK((n3 - v * v).abs().maxCoeff() == 0.0);  // u^2, not |u| u
    const Vec n4 = nonlinearity_pointwise(v, 4.0);
    CHECK((n4 - v * v * v).abs().maxCoeff() < 1e-15);  // |u|^2 u == u^3
    const Vec w3 = nonlinearity_weight_pointwise(v, 3.0);
    CHECK((w3 - 2.0 * v).abs().maxCoeff() == 0.0);
    const Vec w4 = nonlinearity_weight_pointwise(v, 4.0);
    CHECK((w4 - 3.0 * v * v).abs().maxCoeff() < 1e-14);
}

TEST_CASE("integration and norms use the trapezoid-free uniform rule") {
    const Grid g = make_grid(128, EIGEN_PI);
    Field one(g, Vec::Ones(g.n).eval());
    CHECK(integrate(one) == doctest::Approx(2.0 * EIGEN_PI).epsilon(1e-14));
    Field s(g, g.x.sin().eval());
    CHECK(norm_l2(s) == doctest::Approx(std::sqrt(EIGEN_PI)).epsilon(1e-13));
    CHECK(norm_sup(s) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lp_power_integral(s, 2.0) == doctest::Approx(EIGEN_PI).epsilon(1e-13));
}
