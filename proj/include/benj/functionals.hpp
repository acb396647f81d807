#pragma once

#include <limits>

#include "benj/spectral.hpp"

// Scalar functionals of the travelling-wave problem
//   (D-1)^2 phi + omega*phi - N_p(phi) = 0,   N_3(u) = u^2, N_p(u) = |u|^{p-2}u.

namespace benj {

struct WaveParams {
    Real omega;
    Real p;
    WaveParams(Real omega_, Real p_) : omega(omega_), p(p_) {
        if (!(omega > 0)) throw std::invalid_argument("WaveParams: omega must be positive");
        if (!(p > 2)) throw std::invalid_argument("WaveParams: p must exceed 2");
    }
};

struct PhysicalParams {
    Real c;
    Real gamma;
};

// Speed/dispersion pair (c, gamma) -> omega = 4c/gamma^2 - 1.  Requires the
// existence condition 4c > gamma^2 (equivalently omega > 0).
inline Real physical_to_normalized(const PhysicalParams& pp) {
    if (pp.gamma == 0)
        throw std::invalid_argument("physical_to_normalized: gamma must be nonzero");
    const Real omega = 4.0 * pp.c / (pp.gamma * pp.gamma) - 1.0;
    if (!(omega > 0))
        throw std::invalid_argument(
            "physical_to_normalized: requires 4c > gamma^2 (omega > 0); no wave otherwise");
    return omega;
}

// Signed integral for p = 3, absolute power otherwise; the potential term of
// every identity below uses this convention.
inline Real nonlinear_power_integral(const Field& u, Real p) {
    if (p == 3.0) return u.values.cube().sum() * u.grid.dx;
    return lp_power_integral(u, p);
}

inline Real quad_form(const Field& u, Real omega) {
    return seminorm_sq(u, SymbolKind::ShiftedSquare) + omega * norm_l2(u) * norm_l2(u);
}

// Interpolation quotient behind the constant C_{alpha,p}: numerator int u^3
// (p = 3) or int |u|^p, denominator ||u||^{p-2} (||(D-1)u||^2 + alpha||u||^2).
inline Real gn_quotient(const Field& u, Real alpha, Real p) {
    if (!(alpha > 0)) throw std::invalid_argument("gn_quotient: alpha must be positive");
    if (!(p > 2 && p <= 6)) throw std::invalid_argument("gn_quotient: p must lie in (2, 6]");
    const Real nrm = norm_l2(u);
    if (!(nrm > 0)) throw std::invalid_argument("gn_quotient: u must be nonzero");
    const Real denom = std::pow(nrm, p - 2.0) * quad_form(u, alpha);
    return nonlinear_power_integral(u, p) / denom;
}

// Sobolev embedding quotient ||u||_p^2 / (||(D-1)u||^2 + omega ||u||^2); its
// supremum is the constant D_{p,omega}.  p = 2 is admitted (value 1/omega in
// the concentration limit).
inline Real sobolev_quotient(const Field& u, Real omega, Real p) {
    if (!(omega > 0)) throw std::invalid_argument("sobolev_quotient: omega must be positive");
    if (!(p >= 2)) throw std::invalid_argument("sobolev_quotient: p must be >= 2");
    const Real nrm = norm_l2(u);
    if (!(nrm > 0)) throw std::invalid_argument("sobolev_quotient: u must be nonzero");
    const Real np = std::pow(lp_power_integral(u, p), 2.0 / p);
    return np / quad_form(u, omega);
}

inline Real sobolev_quotient(const Field& u, const WaveParams& params) {
    return sobolev_quotient(u, params.omega, params.p);
}

struct PohozaevResiduals {
    Real r1;
    Real r2;
    Real relative;
};

// The two variational identities every decaying solution satisfies:
//   r1:  ||phi'||^2 - 2||D^{1/2}phi||^2 + (omega+1)||phi||^2 - P = 0
//   r2:  ||phi'||^2 - (omega+1)||phi||^2 + (2/p) P = 0
// with P the nonlinear power integral.
inline PohozaevResiduals pohozaev_residuals(const Field& phi, const WaveParams& params) {
    const Real deriv_sq = [&] {
        Field d = derivative(phi);
        return norm_l2(d) * norm_l2(d);
    }();
    const Real half_sq = seminorm_sq(phi, SymbolKind::Zygmund);
    const Real l2_sq = norm_l2(phi) * norm_l2(phi);
    const Real P = nonlinear_power_integral(phi, params.p);
    PohozaevResiduals r;
    r.r1 = deriv_sq - 2.0 * half_sq + (params.omega + 1.0) * l2_sq - P;
    r.r2 = deriv_sq - (params.omega + 1.0) * l2_sq + (2.0 / params.p) * P;
    const Real scale = std::abs(P);
    const Real worst = std::max(std::abs(r.r1), std::abs(r.r2));
    r.relative = scale > 0 ? worst / scale
                           : (worst == 0 ? 0.0 : std::numeric_limits<Real>::infinity());
    return r;
}

struct Invariants {
    Real mass;
    Real l2;
    Real hamiltonian;
};

// Conserved quantities of u_t + d/dx((D-1)^2 u + omega u - N_p(u)) = 0.
inline Invariants invariants(const Field& u, const WaveParams& params) {
    Invariants q;
    q.mass = integrate(u);
    q.l2 = norm_l2(u) * norm_l2(u);
    q.hamiltonian = 0.5 * seminorm_sq(u, SymbolKind::ShiftedSquare) +
                    0.5 * params.omega * q.l2 -
                    nonlinear_power_integral(u, params.p) / params.p;
    return q;
}

// Closed-form instability margin p/4 + 4/p - 1/omega - 5/2; a positive value
// certifies a negative direction for the scaling test function.
inline Real instability_margin(Real omega, Real p) {
    if (!(omega > 0)) throw std::invalid_argument("instability_margin: omega must be positive");
    if (!(p > 2 && p <= 10))
        throw std::invalid_argument("instability_margin: p must lie in (2, 10]");
    return p / 4.0 + 4.0 / p - 1.0 / omega - 2.5;
}

// Wave speed reproduced by the constrained maximizer at multiplier alpha,
// with ratio = ||(D-1)phi||^2 / ||phi||^2.
inline Real omega_from_alpha(Real alpha, Real ratio, Real p) {
    if (!(alpha > 0)) throw std::invalid_argument("omega_from_alpha: alpha must be positive");
    return p * alpha / 2.0 + (p - 2.0) / 2.0 * ratio;
}

// Cubic-case form written with the full quadratic form; equal to
// omega_from_alpha(alpha, ratio, 3) identically.
inline Real omega_from_alpha_cubic(Real alpha, Real ratio) {
    if (!(alpha > 0)) throw std::invalid_argument("omega_from_alpha_cubic: alpha must be positive");
    return alpha + (ratio + alpha) / 2.0;
}

}  // namespace benj
