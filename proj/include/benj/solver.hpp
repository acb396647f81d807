#pragma once

#include <optional>
#include <string>
#include <vector>

#include "benj/errors.hpp"
#include "benj/functionals.hpp"

// Travelling-wave profile solvers: a stabilized fixed-point iteration on the
// profile equation and a gradient ascent on the variational quotients, plus
// diagnostics (tail decay, alpha sweeps).

namespace benj {

enum class SeedKind { Green, SpectralBump, File };

struct SeedSpec {
    SeedKind kind = SeedKind::Green;
    std::string path;       // File seed: CSV with columns x,value
    Real bump_eps = 0.05;   // SpectralBump seed width
};

struct SolverConfig {
    int max_iter = 2000;
    Real tol = 1e-10;
    Real stab_exponent = 0;  // <= 0 selects the default (p-1)/(p-2)
    SeedSpec seed;
    Real damping = 0.1;      // initial ascent step
};

enum class SolveRoute { FixedPoint, QuotientMax };

inline const char* route_name(SolveRoute r) {
    return r == SolveRoute::FixedPoint ? "fixedpoint" : "quotient";
}

struct WaveProfile {
    Field phi;
    WaveParams params;
    Real residual = 0;   // ||(D-1)^2 phi + omega phi - N_p(phi)|| / ||phi||
    int iterations = 0;
    SolveRoute route = SolveRoute::FixedPoint;
};

enum class QuotientProblem { GN, Sobolev };

struct MaximizerReport {
    QuotientProblem problem;
    Real p = 0;
    Real alpha = 0;           // GN only
    Real quotient_value = 0;  // C_alpha (GN) or D_{p,omega} (Sobolev)
    Real omega = 0;           // omega_alpha (GN) or the prescribed omega (Sobolev)
    int iterations = 0;
    Real stationarity = 0;    // scale-invariant gradient norm at exit
    Real el_residual = 0;     // relative Euler-Lagrange residual of the wave
    Field maximizer;          // unit-norm varphi
    WaveProfile wave;         // canonical rescaled wave
};

struct DecayReport {
    Real k_estimate = 0;         // plateau of x^2 |phi(x)|
    Real window_lo = 0;          // window [L/4, L/2] in |x|
    Real window_hi = 0;
    Real plateau_variation = 0;  // max/min - 1 over the window
};

struct SweepRow {
    Real alpha = 0;
    Real quotient = 0;
    Real wave_norm = 0;
    Real omega = 0;
    std::string status;  // "ok" or an error message
};

// Residual of the profile equation with the dealiased nonlinearity.
Real profile_residual(const Field& phi, const WaveParams& params);

// Shift the peak to x = 0 (sub-grid accurate), symmetrize when the even
// defect is below 1e-8, and fix the sign of the peak where the equation
// allows it.
Field canonical_center(const Field& phi, Real p);

// Relative even-symmetry defect ||phi - phi(-x)|| / ||phi||.
Real even_defect(const Field& phi);

Field make_seed(const Grid& g, const WaveParams& params, const SeedSpec& seed);

// Stabilized fixed-point iteration phi <- M^gamma * (S+omega)^{-1} N_p(phi).
WaveProfile solve_fixed_point(const Grid& g, const WaveParams& params,
                              const SolverConfig& config = {});

// Normalized gradient ascent on the selected quotient.  For GN pass alpha;
// for Sobolev pass the wave speed omega.  An optional start overrides the
// configured seed (used for warm starts).
MaximizerReport maximize_quotient(const Grid& g, QuotientProblem problem, Real alpha_or_omega,
                                  Real p, const SolverConfig& config = {},
                                  const std::optional<Field>& start = std::nullopt);

// Multiplier alpha whose maximizer speed omega_alpha equals omega
// (bisection to 1e-8 in omega; checks monotonicity on the bracket).
Real find_alpha_for_omega(const Grid& g, Real omega, Real p, const SolverConfig& config = {},
                          std::optional<MaximizerReport>* out = nullptr);

// Fixed-point route with fallback to the quotient route on failure.
WaveProfile solve_profile(const Grid& g, const WaveParams& params,
                          const SolverConfig& config = {});

DecayReport decay_constant(const Field& phi);
DecayReport decay_constant(const WaveProfile& wave);

std::vector<SweepRow> sweep_alpha(const Grid& g, const std::vector<Real>& alphas, Real p,
                                  const SolverConfig& config = {});

}  // namespace benj
