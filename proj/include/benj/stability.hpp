#pragma once

#include <string>
#include <vector>

#include "benj/linearized.hpp"

// Spectral stability of a profile through the nonsymmetric eigenvalue problem
//   dx Lplus v = lambda v
// and the index count n(Lplus) - n(D), with D the 1x1 matrix <Lplus^{-1} phi, phi>.

namespace benj {

struct UnstableMode {
    Complex lambda;
    Vec real_part;
    Vec imag_part;
};

struct SpectrumReport {
    std::vector<Complex> eigenvalues;  // sorted by descending real part
    Real max_real_part = 0;
    Real threshold = 0;           // below this magnitude a part counts as zero
    Real symmetry_defect = 0;     // worst relative mismatch of the {l,-l,conj} pairing
    Real zero_cosine = 0;         // alignment of the best near-zero eigenvector with phi'
    std::vector<UnstableMode> unstable_modes;
    int count_real_unstable = 0;
    int count_quadruples = 0;     // genuinely complex ones with positive real part
};

SpectrumReport kdv_spectrum(const WaveProfile& wave, const OperatorMatrix& op, Real threshold);
SpectrumReport kdv_spectrum(const WaveProfile& wave);

enum class Verdict { Stable, Unstable, Indeterminate };
std::string verdict_name(Verdict v);

struct IndexReport {
    int n_lplus = 0;
    int n_d = 0;          // 1 when dprime < 0
    int rhs = 0;          // n_lplus - n_d
    Real dprime_value = 0;
    Real projected_min = 0;
    int k_r_observed = 0;
    int k_c_observed = 0;
    Real max_real_part = 0;
    Real threshold = 0;
    Verdict verdict = Verdict::Indeterminate;
    GroundStateReport ground;
    SpectrumReport spectrum;
};

IndexReport index_count(const WaveProfile& wave, const OperatorMatrix& op,
                        const EigenDecomposition& dec, const SpectrumReport& spectrum);
IndexReport index_count(const WaveProfile& wave);

}  // namespace benj
