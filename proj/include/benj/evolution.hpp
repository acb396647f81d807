#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "benj/functionals.hpp"
#include "benj/solver.hpp"

// Time integration of u_t + dx((D-1)^2 u + omega u - N(u)) = 0 with an
// integrating-factor RK4 scheme: the linear phase is applied exactly in
// Fourier space, only the nonlinear transport is stepped.

namespace benj {

struct EvolveConfig {
    Real dt = 0;          // <= 0 picks dt from the CFL bound below
    Real t_final = 1;
    int save_every = 0;   // frames kept every k steps; <= 0 keeps endpoints only
    Real cfl_safety = 0.25;  // 0.5 admits a slow resonant amplification of
                             // roundoff on soliton backgrounds over long runs
    Real blowup_factor = 1e6;
};

struct Frame {
    Real time;
    Vec values;
    Invariants invariants;
};

struct EvolveResult {
    Field final_state;          // last finite state reached
    Real dt_used = 0;
    long steps = 0;
    std::vector<Frame> frames;
    Real mass_drift = 0;        // worst |delta| over frames, absolute
    Real l2_drift = 0;          // worst relative drift
    Real hamiltonian_drift = 0; // worst relative drift
    bool aborted = false;       // blow-up or NaN detector fired
    Real abort_time = 0;
    std::string abort_reason;
};

// dt = safety * dx / max(1, sup |N'(u0)|)
Real cfl_dt(const Field& u0, const WaveParams& params, Real safety);

// Exact flow of the linear part over time t.
Field linear_propagator(const Field& u, const WaveParams& params, Real t);

EvolveResult evolve(const Field& u0, const WaveParams& params, const EvolveConfig& config);

// Translation-minimized distance to a template profile, with the optimal shift.
struct AlignedDistance {
    Real distance;
    Real shift;
};
AlignedDistance aligned_distance(const Field& u, const Field& reference);

enum class PerturbationKind { EigenDirection, SeededNoise };

struct PerturbConfig {
    PerturbationKind kind = PerturbationKind::SeededNoise;
    Real eps = 1e-3;       // absolute amplitude of the unit-norm direction
    std::uint64_t seed = 1;
    EvolveConfig evolve;
};

struct GrowthReport {
    std::vector<Real> times;
    std::vector<Real> distances;
    Real lambda_fit = 0;
    Real fit_t0 = 0, fit_t1 = 0;
    Real fit_r2 = 0;
    bool fit_valid = false;
    bool no_growth = false;  // d(t) stayed within 3x its initial value
    Real reference_lambda = 0;
};

// Band-limited, mass-neutral, unit-norm random direction (modes |xi| <= xi_max/4).
Vec noise_direction(const Grid& g, std::uint64_t seed);

GrowthReport perturbation_experiment(const WaveProfile& wave, const PerturbConfig& config,
                                     const Vec* direction = nullptr, Real reference_lambda = 0);

}  // namespace benj
