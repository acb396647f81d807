#pragma once

#include <unsupported/Eigen/FFT>

#include "benj/grid.hpp"

// Fourier-multiplier machinery.
//
// Discrete transforms are complex-to-complex with the unscaled forward DFT
//   hat_k = sum_j f_j exp(-2*pi*i*j*k/n)
// and 1/n on the inverse.  The physically normalized transform reported by
// transform() mimics the continuum convention f^(xi) = (2*pi)^{-1/2} *
// integral f(x) exp(-i*x*xi) dx via trapezoid quadrature, so that
// transform(inverse_transform(F)) == F exactly on the grid.
//
// Multiplier conventions at the unpaired Nyquist mode k = -n/2: odd symbols
// (DxDerivative, Hilbert, and hence Zygmund = Hilbert o DxDerivative) are set
// to zero there to keep real fields real; the even symbols ShiftedSquare,
// Green and Resolvent keep their values.

namespace benj {

enum class SymbolKind { Zygmund, DxDerivative, Hilbert, ShiftedSquare, Green, Resolvent };

inline bool symbol_needs_omega(SymbolKind k) {
    return k == SymbolKind::Green || k == SymbolKind::Resolvent;
}

// FFT workspace bound to one grid size; reusable across calls.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(const Grid& g) : n_(g.n) {}

    CVec to_hat(const Vec& values) {
        CVec in = values.matrix().cast<Complex>();
        CVec out(n_);
        fft_.fwd(out, in);
        return out;
    }

    Vec from_hat(const CVec& hat) {
        CVec out(n_);
        CVec in = hat;
        fft_.inv(out, in);
        return out.real().array();
    }

  private:
    int n_;
    Eigen::FFT<double> fft_;
};

inline CVec to_hat(const Field& f) {
    SpectralWorkspace ws(f.grid);
    return ws.to_hat(f.values);
}

inline Field from_hat(const Grid& g, const CVec& hat) {
    SpectralWorkspace ws(g);
    return Field(g, ws.from_hat(hat));
}

// Multiplier values on the grid's modes, natural FFT order.
inline CVec symbol_values(const Grid& g, SymbolKind kind, Real omega = 0) {
    if (symbol_needs_omega(kind) && !(omega > 0))
        throw std::invalid_argument("symbol_values: Green/Resolvent require omega > 0");
    CVec m(g.n);
    const int ny = g.nyquist_index();
    for (int k = 0; k < g.n; ++k) {
        const Real xi = g.xi[k];
        switch (kind) {
            case SymbolKind::Zygmund:
                m[k] = (k == ny) ? 0.0 : std::abs(xi);
                break;
            case SymbolKind::DxDerivative:
                m[k] = (k == ny) ? Complex(0, 0) : Complex(0, xi);
                break;
            case SymbolKind::Hilbert:
                m[k] = (k == ny || xi == 0) ? Complex(0, 0)
                                            : Complex(0, xi > 0 ? -1.0 : 1.0);
                break;
            case SymbolKind::ShiftedSquare:
                m[k] = (std::abs(xi) - 1.0) * (std::abs(xi) - 1.0);
                break;
            case SymbolKind::Green:
            case SymbolKind::Resolvent:
                m[k] = 1.0 / ((std::abs(xi) - 1.0) * (std::abs(xi) - 1.0) + omega);
                break;
        }
    }
    return m;
}

inline Field apply_symbol(const Field& f, SymbolKind kind, Real omega = 0) {
    SpectralWorkspace ws(f.grid);
    CVec hat = ws.to_hat(f.values);
    hat.array() *= symbol_values(f.grid, kind, omega).array();
    return Field(f.grid, ws.from_hat(hat));
}

inline Field derivative(const Field& f) { return apply_symbol(f, SymbolKind::DxDerivative); }

// Physically normalized transform: entry k holds f^(xi_k), natural FFT order.
inline CVec transform(const Field& f) {
    CVec hat = to_hat(f);
    const Real scale = f.grid.dx / std::sqrt(2.0 * EIGEN_PI);
    for (int k = 0; k < f.grid.n; ++k) hat[k] *= (k % 2 == 0 ? scale : -scale);
    return hat;
}

// Inverse of transform(); takes mode amplitudes F(xi_k) in natural FFT order.
inline Field inverse_transform(const Grid& g, const CVec& amplitudes) {
    const Real dxi = EIGEN_PI / g.half_length;
    const Real scale = g.n * dxi / std::sqrt(2.0 * EIGEN_PI);
    CVec hat(g.n);
    for (int k = 0; k < g.n; ++k) hat[k] = amplitudes[k] * (k % 2 == 0 ? scale : -scale);
    SpectralWorkspace ws(g);
    return Field(g, ws.from_hat(hat));
}

// Index of the mode with xi_k == xi, if representable on the grid.
inline int mode_index(const Grid& g, Real xi) {
    const Real dxi = EIGEN_PI / g.half_length;
    const Real kr = xi / dxi;
    const int k = static_cast<int>(std::lround(kr));
    if (std::abs(kr - k) > 1e-9 || k < -g.n / 2 || k >= g.n / 2)
        throw std::invalid_argument("mode_index: xi is not a grid mode");
    return k >= 0 ? k : k + g.n;
}

// Squared H^{1/2}-type seminorm sum |xi| |f^|^2 and relatives, via Plancherel.
inline Real seminorm_sq(const Field& f, SymbolKind kind, Real omega = 0) {
    CVec amp = transform(f);
    CVec m = symbol_values(f.grid, kind, omega);
    const Real dxi = EIGEN_PI / f.grid.half_length;
    Real s = 0;
    for (int k = 0; k < f.grid.n; ++k) s += std::real(m[k]) * std::norm(amp[k]) * dxi;
    return s;
}

// Green's function of (D-1)^2 + omega: the field whose transform equals
// 1/((|xi|-1)^2 + omega) at every grid mode.
inline Field greens_function(const Grid& g, Real omega) {
    if (!(omega > 0)) throw std::invalid_argument("greens_function: omega must be positive");
    CVec amp = symbol_values(g, SymbolKind::Green, omega);
    return inverse_transform(g, amp);
}

inline Real bump_eta(Real s) {
    const Real s2 = s * s;
    return s2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
}

// Band test function concentrated at |xi| = 1: transform equals
// eta((xi-1)/eps) + eta((xi+1)/eps) + eps*eta(xi/eps) with the analytic bump
// eta(s) = exp(1 - 1/(1-s^2)) on |s| < 1.
inline Field spectral_bump(const Grid& g, Real eps) {
    if (!(eps > 0 && eps < 0.25))
        throw std::invalid_argument("spectral_bump: eps must lie in (0, 1/4)");
    int inside = 0;
    for (int k = 0; k < g.n; ++k)
        if (std::abs(g.xi[k] - 1.0) < eps) ++inside;
    if (inside < 8)
        throw std::invalid_argument("spectral_bump: fewer than 8 modes per bump; refine the grid");
    if (g.xi[g.n / 2 - 1] < 1.0 + eps)
        throw std::invalid_argument("spectral_bump: band extends past the largest resolved mode");
    CVec amp(g.n);
    for (int k = 0; k < g.n; ++k) {
        const Real xi = g.xi[k];
        amp[k] = bump_eta((xi - 1.0) / eps) + bump_eta((xi + 1.0) / eps) +
                 eps * bump_eta(xi / eps);
    }
    return inverse_transform(g, amp);
}

// Pointwise nonlinearity of the travelling-wave problem.  p = 3 is the
// classical quadratic case u^2; other exponents use the odd power
// |u|^{p-2} u.  The linearization weight follows the same convention.
inline Vec nonlinearity_pointwise(const Vec& u, Real p) {
    if (p == 3.0) return u.square();
    return u.abs().pow(p - 2.0) * u;
}

inline Vec nonlinearity_weight_pointwise(const Vec& u, Real p) {
    if (p == 3.0) return 2.0 * u;
    return (p - 1.0) * u.abs().pow(p - 2.0);
}

// Zero-padding factor giving an alias-free product for the polynomial cases.
// p = 3 is the quadratic u^2; every even p has |u|^{p-2}u = u^{p-1}, a degree
// p-1 polynomial, which is alias-free once the working band is p/2 times the
// base band.  Non-polynomial nonlinearities (odd or fractional p) are
// evaluated pointwise on the base grid.
inline int dealias_pad_factor(Real p) {
    if (p == 3.0) return 2;
    const int ip = static_cast<int>(p);
    if (p == ip && ip % 2 == 0 && ip >= 4) return ip / 2;
    return 1;
}

namespace detail {

// Evaluate the pointwise nonlinearity on a pad-times finer grid and truncate
// back to the base band.
inline CVec padded_nonlinearity_hat(const Grid& g, const CVec& u_hat, Real p, int pad) {
    const int n = g.n;
    const int N = pad * n;
    CVec big = CVec::Zero(N);
    for (int k = 0; k < n / 2; ++k) big[k] = u_hat[k];
    for (int k = n / 2; k < n; ++k) big[N - n + k] = u_hat[k];
    Eigen::FFT<double> fft;
    CVec fine(N);
    fft.inv(fine, big);
    Vec fine_vals = fine.real().array() * static_cast<Real>(pad);
    Vec nl = nonlinearity_pointwise(fine_vals, p);
    CVec nl_in = nl.matrix().cast<Complex>();
    CVec nl_hat_big(N);
    fft.fwd(nl_hat_big, nl_in);
    CVec out(n);
    for (int k = 0; k < n / 2; ++k) out[k] = nl_hat_big[k] / static_cast<Real>(pad);
    for (int k = n / 2; k < n; ++k) out[k] = nl_hat_big[N - n + k] / static_cast<Real>(pad);
    return out;
}

}  // namespace detail

// Dealiased nonlinearity in spectral form.
inline CVec nonlinearity_hat(const Grid& g, const CVec& u_hat, Real p) {
    const int pad = dealias_pad_factor(p);
    if (pad > 1) return detail::padded_nonlinearity_hat(g, u_hat, p, pad);
    SpectralWorkspace ws(g);
    Vec u = ws.from_hat(u_hat);
    return ws.to_hat(nonlinearity_pointwise(u, p));
}

inline Field apply_nonlinearity(const Field& u, Real p) {
    SpectralWorkspace ws(u.grid);
    CVec hat = ws.to_hat(u.values);
    return Field(u.grid, ws.from_hat(nonlinearity_hat(u.grid, hat, p)));
}

}  // namespace benj
