#include "benj/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace benj {

namespace {

constexpr Real kThresholdBand = 1e-6;  // fraction of max |eig Lplus| counted as zero

// Phase-normalize an eigenvector: largest-magnitude entry real and positive,
// unit Euclidean norm.  Makes reported eigenvectors deterministic.
CVec normalize_phase(const CVec& v) {
    int imax = 0;
    Real best = -1;
    for (int j = 0; j < v.size(); ++j) {
        const Real a = std::abs(v[j]);
        if (a > best) {
            best = a;
            imax = j;
        }
    }
    CVec w = v / v.norm();
    const Complex pivot = w[imax];
    if (std::abs(pivot) > 0) w *= std::conj(pivot) / std::abs(pivot);
    return w;
}

Real complex_correlation(const CVec& v, const Vec& dir) {
    const Real dn = std::sqrt(dir.square().sum());
    if (!(dn > 0) || v.norm() == 0) return 0;
    const Complex s = v.dot(dir.matrix().cast<Complex>());
    return std::abs(s) / (v.norm() * dn);
}

}  // namespace

SpectrumReport kdv_spectrum(const WaveProfile& wave, const OperatorMatrix& op, Real threshold) {
    const Grid& g = wave.phi.grid;
    const Eigen::MatrixXd dx = multiplier_matrix(g, symbol_values(g, SymbolKind::DxDerivative));
    const Eigen::MatrixXd m = dx * op.matrix;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw NonConvergence("kdv_spectrum: eigensolver failed", 0, 0.0);

    const int n = g.n;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    const CVec lam = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (lam[a].real() != lam[b].real()) return lam[a].real() > lam[b].real();
        return lam[a].imag() > lam[b].imag();
    });

    SpectrumReport rep;
    rep.threshold = threshold;
    rep.eigenvalues.reserve(n);
    for (int i : order) rep.eigenvalues.push_back(lam[i]);
    rep.max_real_part = rep.eigenvalues.front().real();

    // The spectrum is symmetric under both conjugation and negation; measure
    // the worst unmatched eigenvalue relative to the spectral radius, skipping
    // the cluster that is indistinguishable from zero.
    Real radius = 0;
    for (const Complex& l : rep.eigenvalues) radius = std::max(radius, std::abs(l));
    Real defect = 0;
    for (const Complex& l : rep.eigenvalues) {
        if (std::abs(l) <= threshold) continue;
        Real dneg = std::numeric_limits<Real>::infinity();
        Real dconj = dneg;
        for (const Complex& m2 : rep.eigenvalues) {
            dneg = std::min(dneg, std::abs(m2 + l));
            dconj = std::min(dconj, std::abs(m2 - std::conj(l)));
        }
        defect = std::max(defect, std::max(dneg, dconj));
    }
    rep.symmetry_defect = radius > 0 ? defect / radius : 0;

    const Vec dphi = derivative(wave.phi).values;
    Real zero_best = 0;
    for (int i = 0; i < n; ++i) {
        const Complex l = lam[i];
        if (std::abs(l) <= threshold)
            zero_best = std::max(zero_best, complex_correlation(es.eigenvectors().col(i), dphi));
        if (l.real() > threshold && l.imag() >= 0) {
            const CVec v = normalize_phase(es.eigenvectors().col(i));
            rep.unstable_modes.push_back({l, v.real().array(), v.imag().array()});
            if (std::abs(l.imag()) <= threshold)
                ++rep.count_real_unstable;
            else
                ++rep.count_quadruples;
        }
    }
    if (zero_best == 0) {  // no eigenvalue inside the zero band; use the closest one
        int ibest = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(lam[i]) < std::abs(lam[ibest])) ibest = i;
        zero_best = complex_correlation(es.eigenvectors().col(ibest), dphi);
    }
    rep.zero_cosine = zero_best;
    std::sort(rep.unstable_modes.begin(), rep.unstable_modes.end(),
              [](const UnstableMode& a, const UnstableMode& b) {
                  return a.lambda.real() > b.lambda.real();
              });
    return rep;
}

SpectrumReport kdv_spectrum(const WaveProfile& wave) {
    const OperatorMatrix op = assemble_lplus(wave);
    const EigenDecomposition dec = decompose(op);
    return kdv_spectrum(wave, op, kThresholdBand * dec.max_abs());
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "Stable";
        case Verdict::Unstable: return "Unstable";
        default: return "Indeterminate";
    }
}

IndexReport index_count(const WaveProfile& wave, const OperatorMatrix& op,
                        const EigenDecomposition& dec, const SpectrumReport& spectrum) {
    IndexReport rep;
    rep.ground = morse_index(op, dec);
    rep.dprime_value = dprime(op, dec);
    rep.n_lplus = rep.ground.morse_index;
    rep.n_d = rep.dprime_value < 0 ? 1 : 0;
    rep.rhs = rep.n_lplus - rep.n_d;
    rep.projected_min = rep.ground.projected_min;
    rep.k_r_observed = spectrum.count_real_unstable;
    rep.k_c_observed = spectrum.count_quadruples;
    rep.max_real_part = spectrum.max_real_part;
    rep.threshold = spectrum.threshold;
    rep.spectrum = spectrum;

    const bool growth = rep.k_r_observed + rep.k_c_observed > 0;
    if (growth) {
        rep.verdict = Verdict::Unstable;
    } else if (rep.rhs == 0 && rep.max_real_part <= rep.threshold &&
               rep.projected_min >= -rep.ground.kappa) {
        rep.verdict = Verdict::Stable;
    } else {
        rep.verdict = Verdict::Indeterminate;
    }
    return rep;
}

IndexReport index_count(const WaveProfile& wave) {
    const OperatorMatrix op = assemble_lplus(wave);
    const EigenDecomposition dec = decompose(op);
    const SpectrumReport spectrum = kdv_spectrum(wave, op, kThresholdBand * dec.max_abs());
    return index_count(wave, op, dec, spectrum);
}

}  // namespace benj
