#pragma once

#include <Eigen/Dense>

#include "benj/solver.hpp"

// The self-adjoint linearization about a profile,
//   Lplus = (D-1)^2 + omega - W(phi),  W = 2*phi (p = 3), (p-1)|phi|^{p-2} else,
// assembled densely (symbol part as a circulant, potential on the diagonal)
// together with its spectral diagnostics.

namespace benj {

struct OperatorMatrix {
    Eigen::MatrixXd matrix;
    WaveParams params;
    Field phi;
};

// Dense circulant of a Fourier multiplier on the grid.
Eigen::MatrixXd multiplier_matrix(const Grid& g, const CVec& symbol);

OperatorMatrix assemble_lplus(const Field& phi, const WaveParams& params);
OperatorMatrix assemble_lplus(const WaveProfile& wave);

// Matrix-free action of the same operator.
Vec apply_lplus(const Field& phi, const WaveParams& params, const Vec& v);

// || Lplus phi' || / || phi' ||, the discrete translation-kernel identity.
Real kernel_residual(const WaveProfile& wave);

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
    Real max_abs() const { return std::max(std::abs(values[0]), std::abs(values[values.size() - 1])); }
};

EigenDecomposition decompose(const OperatorMatrix& op);

struct GroundStateReport {
    int morse_index = 0;       // eigenvalues below -kappa
    int kernel_dim = 0;        // eigenvalues within [-kappa, kappa]
    Real kappa = 0;            // kernel bandwidth used
    Real lambda_min = 0;
    Real kernel_eigenvalue = 0;
    Real kernel_cosine = 0;    // alignment of the best kernel vector with phi'
    Real projected_min = 0;    // min Rayleigh quotient orthogonal to phi
};

GroundStateReport morse_index(const OperatorMatrix& op, const EigenDecomposition& dec);
GroundStateReport morse_index(const OperatorMatrix& op);

// Solve Lplus w = rhs with the kernel band deflated; IllPosed when rhs has a
// significant kernel component.
Vec lplus_solve_deflated(const OperatorMatrix& op, const EigenDecomposition& dec, const Vec& rhs);

// d' = <Lplus^{-1} phi, phi>, the 1x1 constraint matrix of the index count.
Real dprime(const OperatorMatrix& op, const EigenDecomposition& dec);
Real dprime(const OperatorMatrix& op);

struct EtaReport {
    Real numeric = 0;         // <Lplus eta, eta> for eta = x phi' + phi/2
    Real closed_form = 0;     // (omega+1)||phi||^2 - (p/4 + 4/p - 3/2) P
    Real identity_residual = 0;  // relative defect of the closed form for Lplus eta
    Real orthogonality = 0;      // |<eta, phi>| / (||eta|| ||phi||)
    bool truncation_limited = false;  // |x phi'| at the boundary above 1e-6 peak
};

EtaReport eta_test(const WaveProfile& wave);

}  // namespace benj
