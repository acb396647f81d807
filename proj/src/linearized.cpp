#include "benj/linearized.hpp"

#include <algorithm>
#include <limits>

namespace benj {

namespace {

// Fraction of the largest |eigenvalue| below which a mode counts as kernel.
constexpr Real kKernelBand = 1e-6;
// Kernel mass in a right-hand side above this relative level blocks the solve.
constexpr Real kKernelOverlapLimit = 1e-3;

}  // namespace

Eigen::MatrixXd multiplier_matrix(const Grid& g, const CVec& symbol) {
    SpectralWorkspace ws(g);
    const Vec kernel = ws.from_hat(symbol);  // convolution kernel, one row of the circulant
    const int n = g.n;
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) m(j, l) = kernel[(j - l + n) % n];
    return m;
}

OperatorMatrix assemble_lplus(const Field& phi, const WaveParams& params) {
    const Grid& g = phi.grid;
    Eigen::MatrixXd m = multiplier_matrix(g, symbol_values(g, SymbolKind::ShiftedSquare));
    m.diagonal().array() += params.omega;
    m.diagonal().array() -= nonlinearity_weight_pointwise(phi.values, params.p);
    return {std::move(m), params, phi};
}

OperatorMatrix assemble_lplus(const WaveProfile& wave) {
    return assemble_lplus(wave.phi, wave.params);
}

Vec apply_lplus(const Field& phi, const WaveParams& params, const Vec& v) {
    SpectralWorkspace ws(phi.grid);
    CVec hat = ws.to_hat(v);
    hat.array() *= symbol_values(phi.grid, SymbolKind::ShiftedSquare).array();
    Vec out = ws.from_hat(hat);
    out += params.omega * v;
    out -= nonlinearity_weight_pointwise(phi.values, params.p) * v;
    return out;
}

Real kernel_residual(const WaveProfile& wave) {
    const Vec dphi = derivative(wave.phi).values;
    const Real dn = std::sqrt(dphi.square().sum());
    if (!(dn > 0)) throw RangeError("kernel_residual: profile has a vanishing derivative");
    const Vec r = apply_lplus(wave.phi, wave.params, dphi);
    return std::sqrt(r.square().sum()) / dn;
}

EigenDecomposition decompose(const OperatorMatrix& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix);
    if (es.info() != Eigen::Success)
        throw NonConvergence("decompose: symmetric eigensolver failed", 0, 0.0);
    return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

// Smallest Rayleigh quotient of the decomposed operator restricted to the
// orthogonal complement of unit_dir.  Exact modes orthogonal to unit_dir stay
// available; among the coupled ones the constrained minimum is the smallest
// root of the secular equation sum c_i^2 / (lambda_i - mu) = 0, which lies
// between the two lowest coupled eigenvalues and is found by bisection.
Real constrained_min(const EigenDecomposition& dec, const Eigen::VectorXd& unit_dir) {
    const Eigen::VectorXd c = dec.vectors.transpose() * unit_dir;
    const int n = static_cast<int>(dec.values.size());
    const Real drop = 1e-12;
    Real ortho_min = std::numeric_limits<Real>::infinity();
    int a0 = -1, a1 = -1;
    for (int i = 0; i < n; ++i) {
        if (std::abs(c[i]) <= drop) {
            ortho_min = std::min(ortho_min, dec.values[i]);
        } else if (a0 < 0) {
            a0 = i;
        } else if (a1 < 0) {
            a1 = i;
        }
    }
    if (a0 < 0) return dec.values[0];  // direction is numerically zero
    if (a1 < 0) return std::min(ortho_min, dec.values[a0]);
    Real lo = dec.values[a0], hi = dec.values[a1];
    const auto secular = [&](Real mu) {
        Real s = 0;
        for (int i = 0; i < n; ++i)
            if (std::abs(c[i]) > drop) s += c[i] * c[i] / (dec.values[i] - mu);
        return s;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        const Real mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (secular(mid) < 0 ? lo : hi) = mid;
    }
    return std::min(ortho_min, 0.5 * (lo + hi));
}

}  // namespace

GroundStateReport morse_index(const OperatorMatrix& op, const EigenDecomposition& dec) {
    GroundStateReport rep;
    rep.kappa = kKernelBand * dec.max_abs();
    rep.lambda_min = dec.values[0];
    const Vec dphi = derivative(op.phi).values;
    const Real dn = std::sqrt(dphi.square().sum());
    const int n = static_cast<int>(dec.values.size());
    Real best = -1;
    for (int i = 0; i < n; ++i) {
        const Real lam = dec.values[i];
        if (lam < -rep.kappa) {
            ++rep.morse_index;
        } else if (lam <= rep.kappa) {
            ++rep.kernel_dim;
            const Real cosine =
                dn > 0 ? std::abs(dec.vectors.col(i).dot(dphi.matrix())) / (dn * dec.vectors.col(i).norm())
                       : 0.0;
            if (cosine > best) {
                best = cosine;
                rep.kernel_eigenvalue = lam;
                rep.kernel_cosine = cosine;
            }
        }
    }
    const Eigen::VectorXd phi_unit = op.phi.values.matrix().normalized();
    rep.projected_min = constrained_min(dec, phi_unit);
    return rep;
}

GroundStateReport morse_index(const OperatorMatrix& op) { return morse_index(op, decompose(op)); }

Vec lplus_solve_deflated(const OperatorMatrix& op, const EigenDecomposition& dec, const Vec& rhs) {
    const Real kappa = kKernelBand * dec.max_abs();
    const Eigen::VectorXd c = dec.vectors.transpose() * rhs.matrix();
    const Real rn = c.norm();
    if (!(rn > 0)) throw RangeError("lplus_solve_deflated: zero right-hand side");
    const int n = static_cast<int>(dec.values.size());
    Eigen::VectorXd y(n);
    Real kernel_mass = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(dec.values[i]) <= kappa) {
            kernel_mass += c[i] * c[i];
            y[i] = 0;
        } else {
            y[i] = c[i] / dec.values[i];
        }
    }
    if (std::sqrt(kernel_mass) > kKernelOverlapLimit * rn)
        throw IllPosed("lplus_solve_deflated: right-hand side overlaps the kernel");
    return (dec.vectors * y).array();
}

Real dprime(const OperatorMatrix& op, const EigenDecomposition& dec) {
    const Vec w = lplus_solve_deflated(op, dec, op.phi.values);
    return (w * op.phi.values).sum() * op.phi.grid.dx;
}

Real dprime(const OperatorMatrix& op) { return dprime(op, decompose(op)); }

EtaReport eta_test(const WaveProfile& wave) {
    const Grid& g = wave.phi.grid;
    const Real p = wave.params.p;
    const Real omega = wave.params.omega;
    const Field dphi = derivative(wave.phi);
    const Vec eta = g.x * dphi.values + 0.5 * wave.phi.values;
    const Vec leta = apply_lplus(wave.phi, wave.params, eta);

    EtaReport rep;
    rep.numeric = (leta * eta).sum() * g.dx;
    const Real l2 = norm_l2(wave.phi);
    const Real P = nonlinear_power_integral(wave.phi, p);
    rep.closed_form = (omega + 1.0) * l2 * l2 - (p / 4.0 + 4.0 / p - 1.5) * P;

    // L eta collapses to (p-6)/2 phi'' + (p-4) D phi - (p-2)(omega+1)/2 phi
    // on an exact profile; measure the relative defect of that reduction.
    const Vec ddphi = derivative(dphi).values;
    const Vec zphi = apply_symbol(wave.phi, SymbolKind::Zygmund).values;
    const Vec reduced = 0.5 * (p - 6.0) * ddphi + (p - 4.0) * zphi -
                        0.5 * (p - 2.0) * (omega + 1.0) * wave.phi.values;
    const Real leta_n = std::sqrt(leta.square().sum());
    rep.identity_residual =
        leta_n > 0 ? std::sqrt((leta - reduced).square().sum()) / leta_n
                   : std::numeric_limits<Real>::infinity();

    const Real eta_n = std::sqrt(eta.square().sum()) * std::sqrt(g.dx);
    rep.orthogonality = std::abs((eta * wave.phi.values).sum() * g.dx) / (eta_n * l2);

    // x phi' does not decay as fast as phi; flag runs where the box cuts it off.
    const Real peak = wave.phi.values.abs().maxCoeff();
    Real edge = 0;
    for (int j : {0, 1, g.n - 2, g.n - 1})
        edge = std::max(edge, std::abs(g.x[j] * dphi.values[j]));
    rep.truncation_limited = edge > 1e-6 * peak;
    return rep;
}

}  // namespace benj
