#include "benj/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace benj {

namespace {

// Transport phase xi*((|xi|-1)^2 + omega) with the odd-symbol Nyquist rule.
Vec transport_phase(const Grid& g, Real omega) {
    const CVec s = symbol_values(g, SymbolKind::ShiftedSquare);
    const CVec d = symbol_values(g, SymbolKind::DxDerivative);
    Vec lambda(g.n);
    for (int k = 0; k < g.n; ++k) lambda[k] = d[k].imag() * (s[k].real() + omega);
    return lambda;
}

CVec phase_factor(const Vec& lambda, Real t) {
    CVec e(lambda.size());
    for (int k = 0; k < lambda.size(); ++k) e[k] = std::polar(1.0, -lambda[k] * t);
    return e;
}

}  // namespace

Real cfl_dt(const Field& u0, const WaveParams& params, Real safety) {
    if (!(safety > 0)) throw std::invalid_argument("cfl_dt: safety must be positive");
    const Real speed = nonlinearity_weight_pointwise(u0.values, params.p).abs().maxCoeff();
    return safety * u0.grid.dx / std::max(1.0, speed);
}

Field linear_propagator(const Field& u, const WaveParams& params, Real t) {
    SpectralWorkspace ws(u.grid);
    CVec hat = ws.to_hat(u.values);
    hat.array() *= phase_factor(transport_phase(u.grid, params.omega), t).array();
    return Field(u.grid, ws.from_hat(hat));
}

EvolveResult evolve(const Field& u0, const WaveParams& params, const EvolveConfig& config) {
    if (!(config.t_final > 0)) throw std::invalid_argument("evolve: t_final must be positive");
    const Grid& g = u0.grid;
    const Real dt_req = config.dt > 0 ? config.dt : cfl_dt(u0, params, config.cfl_safety);
    const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(config.t_final / dt_req - 1e-12)));
    const Real h = config.t_final / static_cast<Real>(nsteps);

    const Vec lambda = transport_phase(g, params.omega);
    const CVec e_half = phase_factor(lambda, 0.5 * h);
    const CVec e_full = phase_factor(lambda, h);
    const CVec ixi = symbol_values(g, SymbolKind::DxDerivative);

    SpectralWorkspace ws(g);
    CVec hat = ws.to_hat(u0.values);
    const Real sup0 = std::max(u0.values.abs().maxCoeff(), 1e-6);
    const Real blowup_level = config.blowup_factor * sup0;

    EvolveResult res;
    res.dt_used = h;
    const long stride = config.save_every > 0 ? config.save_every : nsteps;
    const auto n_of = [&](const CVec& u_hat) -> CVec {
        return ixi.cwiseProduct(nonlinearity_hat(g, u_hat, params.p));
    };
    const auto push_frame = [&](Real t, const Vec& vals) {
        res.frames.push_back({t, vals, invariants(Field(g, vals), params)});
    };
    Vec last_good = u0.values;
    push_frame(0.0, last_good);

    for (long step = 0; step < nsteps; ++step) {
        const CVec a = n_of(hat);
        const CVec b = n_of(e_half.cwiseProduct(hat + 0.5 * h * a));
        const CVec c = n_of(e_half.cwiseProduct(hat) + 0.5 * h * b);
        const CVec d = n_of(e_full.cwiseProduct(hat) + h * e_half.cwiseProduct(c));
        hat = e_full.cwiseProduct(hat) +
              (h / 6.0) * (e_full.cwiseProduct(a) + 2.0 * e_half.cwiseProduct(b + c) + d);

        const Real t = static_cast<Real>(step + 1) * h;
        const Vec u = ws.from_hat(hat);
        ++res.steps;
        if (!u.allFinite()) {
            res.aborted = true;
            res.abort_time = t;
            res.abort_reason = "nan detected";
            break;
        }
        if (u.abs().maxCoeff() > blowup_level) {
            res.aborted = true;
            res.abort_time = t;
            res.abort_reason = "blow-up detected";
            last_good = u;
            push_frame(t, u);
            break;
        }
        last_good = u;
        if ((step + 1) % stride == 0 || step + 1 == nsteps) push_frame(t, u);
    }

    res.final_state = Field(g, last_good);
    const Invariants q0 = res.frames.front().invariants;
    for (const Frame& f : res.frames) {
        res.mass_drift = std::max(res.mass_drift, std::abs(f.invariants.mass - q0.mass));
        res.l2_drift = std::max(res.l2_drift,
                                std::abs(f.invariants.l2 - q0.l2) / std::max(q0.l2, 1e-300));
        res.hamiltonian_drift =
            std::max(res.hamiltonian_drift, std::abs(f.invariants.hamiltonian - q0.hamiltonian) /
                                                std::max(std::abs(q0.hamiltonian), 1e-300));
    }
    return res;
}

AlignedDistance aligned_distance(const Field& u, const Field& reference) {
    if (!same_grid(u.grid, reference.grid))
        throw std::invalid_argument("aligned_distance: grid mismatch");
    const Grid& g = u.grid;
    SpectralWorkspace ws(g);
    const CVec uh = ws.to_hat(u.values);
    const CVec rh = ws.to_hat(reference.values);
    const CVec cross = uh.cwiseProduct(rh.conjugate());

    // <u(.+s), ref> at every integer shift via one inverse transform.
    const Vec corr = ws.from_hat(cross) * g.dx;
    int jbest = 0;
    for (int j = 1; j < g.n; ++j)
        if (corr[j] > corr[jbest]) jbest = j;
    Real s = jbest * g.dx;
    if (s >= g.half_length) s -= 2.0 * g.half_length;

    const Real scale = g.dx / g.n;
    const auto cval = [&](Real sh) {
        Real v = 0;
        for (int k = 0; k < g.n; ++k) v += std::real(cross[k] * std::polar(1.0, g.xi[k] * sh));
        return scale * v;
    };
    for (int it = 0; it < 8; ++it) {  // sub-grid refinement of the correlation peak
        Real d1 = 0, d2 = 0;
        for (int k = 0; k < g.n; ++k) {
            const Complex z = cross[k] * std::polar(1.0, g.xi[k] * s);
            d1 -= g.xi[k] * z.imag();
            d2 -= g.xi[k] * g.xi[k] * z.real();
        }
        if (d2 >= 0) break;
        Real ds = -d1 / d2;
        ds = std::clamp(ds, -g.dx, g.dx);
        s += ds;
        if (std::abs(ds) < 1e-14 * std::max(1.0, std::abs(s))) break;
    }

    const Real uu = u.values.square().sum() * g.dx;
    const Real rr = reference.values.square().sum() * g.dx;
    AlignedDistance out;
    out.shift = s;
    out.distance = std::sqrt(std::max(0.0, uu + rr - 2.0 * cval(s)));
    return out;
}

Vec noise_direction(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto uniform = [&]() { return std::ldexp(static_cast<Real>(rng() >> 11), -53); };
    // Box-Muller keeps the draw sequence identical across standard libraries.
    const auto gauss = [&]() {
        Real u1 = uniform();
        while (u1 <= 0) u1 = uniform();
        const Real u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * EIGEN_PI * u2);
    };
    const Real xi_cap = std::abs(g.xi[g.nyquist_index()]) / 4.0;
    CVec hat = CVec::Zero(g.n);
    for (int k = 1; k < g.n / 2; ++k) {
        if (std::abs(g.xi[k]) > xi_cap) break;
        const Complex z(gauss(), gauss());
        hat[k] = z;
        hat[g.n - k] = std::conj(z);
    }
    SpectralWorkspace ws(g);
    Vec v = ws.from_hat(hat);
    const Real nrm = std::sqrt(v.square().sum() * g.dx);
    if (!(nrm > 0)) throw RangeError("noise_direction: degenerate band");
    return v / nrm;
}

GrowthReport perturbation_experiment(const WaveProfile& wave, const PerturbConfig& config,
                                     const Vec* direction, Real reference_lambda) {
    const Grid& g = wave.phi.grid;
    Vec dir;
    if (config.kind == PerturbationKind::EigenDirection) {
        if (direction == nullptr || direction->size() != g.n)
            throw std::invalid_argument(
                "perturbation_experiment: eigen mode needs a direction on the same grid");
        dir = *direction;
    } else {
        dir = noise_direction(g, config.seed);
    }
    const Real dn = std::sqrt(dir.square().sum() * g.dx);
    if (!(dn > 0)) throw RangeError("perturbation_experiment: zero direction");
    dir /= dn;

    EvolveConfig econf = config.evolve;
    if (econf.save_every <= 0) {
        const Real dt_req = econf.dt > 0 ? econf.dt : cfl_dt(wave.phi, wave.params, econf.cfl_safety);
        const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(econf.t_final / dt_req)));
        econf.save_every = static_cast<int>(std::max<long>(1, nsteps / 512));
    }
    const Field u0(g, wave.phi.values + config.eps * dir);
    const EvolveResult run = evolve(u0, wave.params, econf);

    GrowthReport rep;
    rep.reference_lambda = reference_lambda;
    rep.times.reserve(run.frames.size());
    rep.distances.reserve(run.frames.size());
    for (const Frame& f : run.frames) {
        rep.times.push_back(f.time);
        rep.distances.push_back(aligned_distance(Field(g, f.values), wave.phi).distance);
    }

    const Real d0 = rep.distances.front();
    Real dmax = 0;
    for (Real d : rep.distances) dmax = std::max(dmax, d);
    rep.no_growth = dmax <= 3.0 * d0;

    // Fit log d(t) on the final clean growth segment: within three e-folds of
    // the cap (release from the initial transient, which can sit well above
    // 10*d0 for eigen-direction starts) but still small against the wave.
    // Only the last contiguous in-window stretch ending at the cap crossing
    // enters the fit, so saturated or re-entering frames cannot pollute it.
    const Real hi = 0.02 * norm_l2(wave.phi);
    const Real lo = std::max(10.0 * d0, hi / 8.0);
    std::size_t end = rep.distances.size();
    for (std::size_t i = 0; i < rep.distances.size(); ++i) {
        if (rep.distances[i] > hi) { end = i; break; }
    }
    std::size_t begin = end;
    while (begin > 0 && rep.distances[begin - 1] >= lo && rep.distances[begin - 1] <= hi) --begin;

    Real sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const int m = static_cast<int>(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        const Real x = rep.times[i];
        const Real y = std::log(rep.distances[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    if (m >= 4 && rep.times[end - 1] > rep.times[begin]) {
        const Real det = m * sxx - sx * sx;
        rep.lambda_fit = (m * sxy - sx * sy) / det;
        const Real ybar = sy / m;
        const Real ss_tot = syy - m * ybar * ybar;
        Real ss_res = 0;
        const Real icpt = (sy - rep.lambda_fit * sx) / m;
        for (std::size_t i = begin; i < end; ++i) {
            const Real e = std::log(rep.distances[i]) - (icpt + rep.lambda_fit * rep.times[i]);
            ss_res += e * e;
        }
        rep.fit_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
        rep.fit_t0 = rep.times[begin];
        rep.fit_t1 = rep.times[end - 1];
        rep.fit_valid = true;
    }
    return rep;
}

}  // namespace benj
