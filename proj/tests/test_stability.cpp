#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "benj/stability.hpp"

using namespace benj;

namespace {

// Small grids keep the dense nonsymmetric eigensolves at a few seconds.
const WaveProfile& stable_wave() {
    static WaveProfile w = solve_fixed_point(make_grid(512, 25.0 * EIGEN_PI),
                                             WaveParams(1.0, 3.0));
    return w;
}

const WaveProfile& unstable_wave() {
    static WaveProfile w = solve_fixed_point(make_grid(1024, 6.25 * EIGEN_PI),
                                             WaveParams(10.0, 10.0));
    return w;
}

const SpectrumReport& stable_spectrum() {
    static SpectrumReport r = kdv_spectrum(stable_wave());
    return r;
}

const SpectrumReport& unstable_spectrum() {
    static SpectrumReport r = kdv_spectrum(unstable_wave());
    return r;
}

}  // namespace

TEST_CASE("spectrum is sorted by descending real part") {
    const SpectrumReport& sr = stable_spectrum();
    REQUIRE(sr.eigenvalues.size() == 512);
    for (std::size_t i = 1; i < sr.eigenvalues.size(); ++i)
        CHECK(sr.eigenvalues[i].real() <= sr.eigenvalues[i - 1].real() + 1e-14);
    CHECK(sr.max_real_part == doctest::Approx(sr.eigenvalues.front().real()));
}

TEST_CASE("subcritical cubic wave has a purely imaginary spectrum") {
    const SpectrumReport& sr = stable_spectrum();
    CHECK(sr.max_real_part <= sr.threshold);
    CHECK(sr.count_real_unstable == 0);
    CHECK(sr.count_quadruples == 0);
    CHECK(sr.unstable_modes.empty());
}

TEST_CASE("spectrum respects the Hamiltonian quadruple symmetry") {
    CHECK(stable_spectrum().symmetry_defect < 1e-6);
    CHECK(unstable_spectrum().symmetry_defect < 1e-6);
}

TEST_CASE("near-zero eigenvector aligns with the translation direction") {
    CHECK(stable_spectrum().zero_cosine > 0.99);
}

TEST_CASE("supercritical wave carries a real growing mode") {
    const SpectrumReport& sr = unstable_spectrum();
    CHECK(sr.max_real_part > sr.threshold);
    CHECK(sr.count_real_unstable >= 1);
    REQUIRE_FALSE(sr.unstable_modes.empty());
    const UnstableMode& m = sr.unstable_modes.front();
    CHECK(m.lambda.real() == doctest::Approx(sr.max_real_part));
    CHECK(std::abs(m.lambda.imag()) <= sr.threshold);
}

TEST_CASE("growing modes are orthogonal to the wave") {
    const SpectrumReport& sr = unstable_spectrum();
    const WaveProfile& w = unstable_wave();
    const Real wnorm = w.phi.values.matrix().norm();
    for (const UnstableMode& m : sr.unstable_modes) {
        const Real re = std::abs((m.real_part * w.phi.values).sum());
        const Real im = std::abs((m.imag_part * w.phi.values).sum());
        const Real vnorm = std::sqrt(m.real_part.matrix().squaredNorm() +
                                     m.imag_part.matrix().squaredNorm());
        // bounded by the kernel residual at this band; tightens with the grid
        CHECK(std::max(re, im) / (vnorm * wnorm) < 1e-4);
    }
}

TEST_CASE("index bookkeeping certifies the stable verdict") {
    const WaveProfile& w = stable_wave();
    const OperatorMatrix op = assemble_lplus(w);
    const EigenDecomposition dec = decompose(op);
    const IndexReport rep = index_count(w, op, dec, stable_spectrum());
    CHECK(rep.n_lplus == 1);
    CHECK(rep.dprime_value < 0);
    CHECK(rep.n_d == 1);
    CHECK(rep.rhs == 0);
    CHECK(rep.k_r_observed == 0);
    CHECK(rep.k_c_observed == 0);
    CHECK(rep.projected_min >= -rep.ground.kappa);
    CHECK(rep.verdict == Verdict::Stable);
}

TEST_CASE("index bookkeeping certifies the unstable verdict") {
    const WaveProfile& w = unstable_wave();
    const OperatorMatrix op = assemble_lplus(w);
    const EigenDecomposition dec = decompose(op);
    const IndexReport rep = index_count(w, op, dec, unstable_spectrum());
    CHECK(rep.n_lplus == 1);
    CHECK(rep.dprime_value > 0);
    CHECK(rep.n_d == 0);
    CHECK(rep.rhs == 1);  // one odd count forces a real growing pair
    CHECK(rep.k_r_observed >= 1);
    CHECK(rep.verdict == Verdict::Unstable);
}

TEST_CASE("verdict names are stable strings") {
    CHECK(verdict_name(Verdict::Stable) == "Stable");
    CHECK(verdict_name(Verdict::Unstable) == "Unstable");
    CHECK(verdict_name(Verdict::Indeterminate) == "Indeterminate");
}
