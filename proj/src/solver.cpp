#include "benj/solver.hpp"

#include <algorithm>
#include <cmath>

#include "benj/io.hpp"

namespace benj {

namespace {

Real hat_norm_sq(const Grid& g, const CVec& hat) {
    return hat.squaredNorm() * g.dx / g.n;
}

Vec shifted_square_plus(const Grid& g, Real omega) {
    Vec m(g.n);
    for (int k = 0; k < g.n; ++k) {
        const Real a = std::abs(g.xi[k]) - 1.0;
        m[k] = a * a + omega;
    }
    return m;
}

Real nonlinear_exponent_coeff(Real p) { return p == 3.0 ? 3.0 : p; }

}  // namespace

Real profile_residual(const Field& phi, const WaveParams& params) {
    SpectralWorkspace ws(phi.grid);
    CVec hat = ws.to_hat(phi.values);
    CVec nl = nonlinearity_hat(phi.grid, hat, params.p);
    Vec m = shifted_square_plus(phi.grid, params.omega);
    CVec r = (hat.array() * m.cast<Complex>().array()).matrix() - nl;
    const Real nrm = std::sqrt(hat_norm_sq(phi.grid, hat));
    if (!(nrm > 0)) return std::sqrt(hat_norm_sq(phi.grid, r));
    return std::sqrt(hat_norm_sq(phi.grid, r)) / nrm;
}

Real even_defect(const Field& phi) {
    const int n = phi.grid.n;
    Real diff = 0, total = 0;
    for (int j = 0; j < n; ++j) {
        const Real r = phi.values[(n - j) % n];
        diff += (phi.values[j] - r) * (phi.values[j] - r);
        total += phi.values[j] * phi.values[j];
    }
    return total > 0 ? std::sqrt(diff / total) : 0.0;
}

Field canonical_center(const Field& phi, Real p) {
    const Grid& g = phi.grid;
    const int n = g.n;
    int imax = 0;
    phi.values.abs().maxCoeff(&imax);
    const int j0 = n / 2;  // node with x = 0
    const int shift = (j0 - imax + n) % n;
    Vec rolled(n);
    for (int j = 0; j < n; ++j) rolled[j] = phi.values[(j - shift + n) % n];

    SpectralWorkspace ws(g);
    CVec hat = ws.to_hat(rolled);
    const int ny = g.nyquist_index();

    // Sub-grid alignment: minimize the odd-part energy over a continuous
    // shift s, using that the odd part of a real field lives in the
    // imaginary parts of its spectrum.
    Real s = 0;
    for (int iter = 0; iter < 8; ++iter) {
        Real d1 = 0, d2 = 0;
        for (int k = 0; k < n; ++k) {
            if (k == ny) continue;
            const Complex c = hat[k] * std::polar(1.0, g.xi[k] * s);
            const Real re = c.real(), im = c.imag();
            d1 += 2.0 * g.xi[k] * im * re;
            d2 += 2.0 * g.xi[k] * g.xi[k] * (re * re - im * im);
        }
        if (!(d2 > 0)) break;
        const Real step = -d1 / d2;
        s += std::clamp(step, -g.dx, g.dx);
        if (std::abs(step) < 1e-15 * g.dx) break;
    }
    if (s != 0) {
        for (int k = 0; k < n; ++k)
            hat[k] *= (k == ny) ? Complex(std::cos(g.xi[k] * s), 0) : std::polar(1.0, g.xi[k] * s);
    }
    Field out(g, ws.from_hat(hat));

    if (even_defect(out) < 1e-8) {
        Vec even(n);
        for (int j = 0; j < n; ++j) even[j] = 0.5 * (out.values[j] + out.values[(n - j) % n]);
        out = Field(g, std::move(even));
    }
    // u -> -u is a symmetry of the odd-power nonlinearity but not of the
    // quadratic one, so only fix the sign away from p = 3.
    if (p != 3.0 && out.values[j0] < 0) out = Field(g, (-out.values).eval());
    return out;
}

Field make_seed(const Grid& g, const WaveParams& params, const SeedSpec& seed) {
    switch (seed.kind) {
        case SeedKind::Green:
            return greens_function(g, params.omega);
        case SeedKind::SpectralBump:
            return spectral_bump(g, seed.bump_eps);
        case SeedKind::File: {
            Field f = read_field_csv(seed.path);
            if (!same_grid(f.grid, g))
                throw std::invalid_argument("make_seed: file grid does not match");
            return f;
        }
    }
    throw std::logic_error("make_seed: unreachable");
}

WaveProfile solve_fixed_point(const Grid& g, const WaveParams& params,
                              const SolverConfig& config) {
    const Real gamma = config.stab_exponent > 0
                           ? config.stab_exponent
                           : (params.p - 1.0) / (params.p - 2.0);
    SpectralWorkspace ws(g);
    Field seed = make_seed(g, params, config.seed);
    CVec hat = ws.to_hat(seed.values);
    Vec m = shifted_square_plus(g, params.omega);

    Real resid = std::numeric_limits<Real>::infinity();
    int iter = 0;
    for (; iter < config.max_iter; ++iter) {
        const Real nrm = std::sqrt(hat_norm_sq(g, hat));
        if (nrm < 1e-12) throw CollapseToZero("fixed point iterates collapsed to zero");
        if (!hat.allFinite())
            throw NonConvergence("fixed point iteration diverged", iter, resid);

        CVec nl = nonlinearity_hat(g, hat, params.p);
        CVec r = (hat.array() * m.cast<Complex>().array()).matrix() - nl;
        resid = std::sqrt(hat_norm_sq(g, r)) / nrm;
        if (resid <= config.tol) break;

        Real num = 0, den = 0;
        for (int k = 0; k < g.n; ++k) {
            num += m[k] * std::norm(hat[k]);
            den += std::real(std::conj(hat[k]) * nl[k]);
        }
        if (!(den != 0) || !std::isfinite(den))
            throw NonConvergence("fixed point normalization degenerate", iter, resid);
        const Real M = num / den;
        if (!(M > 0))
            throw NonConvergence("fixed point normalization lost positivity", iter, resid);
        const Real Mg = std::pow(M, gamma);
        for (int k = 0; k < g.n; ++k) hat[k] = Mg * nl[k] / m[k];
    }
    if (resid > config.tol)
        throw NonConvergence("fixed point iteration exceeded max_iter", iter, resid);

    Field phi = canonical_center(Field(g, ws.from_hat(hat)), params.p);
    WaveProfile wave{phi, params, profile_residual(phi, params), iter, SolveRoute::FixedPoint};
    return wave;
}

namespace {

struct QuotientEval {
    Real value;
    Vec grad;
};

// Value and unconstrained gradient of the selected quotient.
QuotientEval evaluate_quotient(const Grid& g, SpectralWorkspace& ws, QuotientProblem problem,
                               Real coeff, Real p, const Vec& u) {
    CVec hat = ws.to_hat(u);
    Vec msq(g.n);
    for (int k = 0; k < g.n; ++k) {
        const Real a = std::abs(g.xi[k]) - 1.0;
        msq[k] = a * a;
    }
    Vec Su = ws.from_hat((hat.array() * msq.cast<Complex>().array()).matrix());
    const Real dx = g.dx;
    const Real usq = u.square().sum() * dx;
    const Real Q = (Su * u).sum() * dx + coeff * usq;
    QuotientEval out;
    if (problem == QuotientProblem::GN) {
        // Signed cubic numerator in the classical case, int |u|^p otherwise.
        const Real numer = (p == 3.0 ? u.cube().sum() : u.abs().pow(p).sum()) * dx;
        const Real unorm = std::sqrt(usq);
        const Real Dn = std::pow(unorm, p - 2.0) * Q;
        out.value = numer / Dn;
        Vec gradN = nonlinear_exponent_coeff(p) * nonlinearity_pointwise(u, p);
        Vec gradDn = (p - 2.0) * std::pow(unorm, p - 4.0) * Q * u +
                     std::pow(unorm, p - 2.0) * 2.0 * (Su + coeff * u);
        out.grad = (gradN - out.value * gradDn) / Dn;
    } else {
        const Real P = u.abs().pow(p).sum() * dx;
        const Real Np = std::pow(P, 2.0 / p);
        out.value = Np / Q;
        // The L^p norm keeps the absolute value for every p here.
        Vec w = u.abs().pow(p - 2.0) * u;
        Vec gradNp = 2.0 * Np / P * w;
        out.grad = (gradNp - out.value * 2.0 * (Su + coeff * u)) / Q;
    }
    return out;
}

}  // namespace

MaximizerReport maximize_quotient(const Grid& g, QuotientProblem problem, Real alpha_or_omega,
                                  Real p, const SolverConfig& config,
                                  const std::optional<Field>& start) {
    if (!(p > 2)) throw std::invalid_argument("maximize_quotient: p must exceed 2");
    if (problem == QuotientProblem::GN && !(p <= 6))
        throw RangeError("maximize_quotient: interpolation route requires p <= 6");
    if (!(alpha_or_omega > 0))
        throw std::invalid_argument("maximize_quotient: multiplier must be positive");

    SpectralWorkspace ws(g);
    const Real dx = g.dx;
    Vec u;
    if (start) {
        if (!same_grid(start->grid, g))
            throw std::invalid_argument("maximize_quotient: start grid mismatch");
        u = start->values;
    } else {
        WaveParams seed_params(problem == QuotientProblem::Sobolev ? alpha_or_omega : 1.0, p);
        u = make_seed(g, seed_params, config.seed).values;
    }
    {
        const Real nrm = std::sqrt(u.square().sum() * dx);
        if (!(nrm > 0)) throw CollapseToZero("maximize_quotient: zero seed");
        u /= nrm;
    }

    QuotientEval e = evaluate_quotient(g, ws, problem, alpha_or_omega, p, u);
    Real step = config.damping > 0 ? config.damping : 0.1;
    const Real tol_g = std::max(config.tol, 1e-12);
    Real stat = std::numeric_limits<Real>::infinity();
    int iter = 0;
    Vec u_prev, dt_prev;
    bool have_prev = false;
    // Ascent directions are preconditioned with the inverse quadratic-form
    // symbol; the raw L2 gradient would crawl at condition ~ (xi_max-1)^2.
    const CVec resolvent = symbol_values(g, SymbolKind::Resolvent, alpha_or_omega);
    for (; iter < config.max_iter; ++iter) {
        // Tangential gradient on the unit sphere.
        const Real gu = (e.grad * u).sum() * dx;
        Vec gt = e.grad - gu * u;
        stat = std::sqrt(gt.square().sum() * dx) / std::abs(e.value);
        if (stat <= tol_g) break;

        Vec d = ws.from_hat((resolvent.array() * ws.to_hat(gt).array()).matrix());
        const Real du_u = (d * u).sum() * dx;
        Vec dt = d - du_u * u;

        if (have_prev) {
            const Vec du = u - u_prev;
            const Vec dg = dt - dt_prev;
            const Real dd = (du * dg).sum() * dx;
            const Real nn = (du * du).sum() * dx;
            if (std::isfinite(dd) && dd < 0 && nn > 0) {
                const Real bb = -nn / dd;  // Barzilai-Borwein step for ascent
                if (bb > 1e-8 && bb < 1e4) step = bb;
            }
        }
        u_prev = u;
        dt_prev = dt;

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec trial = u + step * dt;
            const Real nrm = std::sqrt(trial.square().sum() * dx);
            if (nrm > 0 && trial.allFinite()) {
                trial /= nrm;
                QuotientEval et = evaluate_quotient(g, ws, problem, alpha_or_omega, p, trial);
                if (std::isfinite(et.value) && et.value > e.value) {
                    u = trial;
                    e = et;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No ascent direction at floating-point resolution.
            break;
        }
        have_prev = true;
        step *= 1.5;
    }
    {
        const Real gu = (e.grad * u).sum() * dx;
        Vec gt = e.grad - gu * u;
        stat = std::sqrt(gt.square().sum() * dx) / std::abs(e.value);
    }
    if (stat > std::max(1e4 * tol_g, 1e-6))
        throw NonConvergence("maximize_quotient failed to reach stationarity", iter, stat);

    // Rescale the unit maximizer into the travelling wave.
    CVec hat = ws.to_hat(u);
    Vec msq(g.n);
    for (int k = 0; k < g.n; ++k) {
        const Real a = std::abs(g.xi[k]) - 1.0;
        msq[k] = a * a;
    }
    Vec Su = ws.from_hat((hat.array() * msq.cast<Complex>().array()).matrix());
    const Real ratio = (Su * u).sum() * dx;  // ||(D-1)u||^2 with ||u|| = 1
    Real lambda_n, omega_out, alpha_out = 0;
    if (problem == QuotientProblem::GN) {
        alpha_out = alpha_or_omega;
        omega_out = omega_from_alpha(alpha_or_omega, ratio, p);
        lambda_n = nonlinear_exponent_coeff(p) / (2.0 * e.value);
    } else {
        omega_out = alpha_or_omega;
        const Real P = u.abs().pow(p).sum() * dx;
        lambda_n = std::pow(P, (2.0 - p) / p) / e.value;
    }
    const Real a = std::pow(lambda_n, 1.0 / (p - 2.0));
    Field wave_phi = canonical_center(Field(g, (a * u).eval()), p);
    WaveParams wp(omega_out, p);
    // The report's residual is for the route's own Euler-Lagrange equation.
    // The embedding quotient keeps |phi|^{p-2}phi at every p, which at p = 3
    // differs from the equation's signed square; measure it directly there.
    Real el;
    if (problem == QuotientProblem::Sobolev && p == 3.0) {
        CVec what = ws.to_hat(wave_phi.values);
        Vec m(g.n);
        for (int k = 0; k < g.n; ++k) {
            const Real s = std::abs(g.xi[k]) - 1.0;
            m[k] = s * s + omega_out;
        }
        CVec nl = ws.to_hat((wave_phi.values.abs() * wave_phi.values).eval());
        CVec r = (what.array() * m.cast<Complex>().array()).matrix() - nl;
        el = std::sqrt(r.squaredNorm() / what.squaredNorm());
    } else {
        el = profile_residual(wave_phi, wp);
    }
    return MaximizerReport{problem,
                           p,
                           alpha_out,
                           e.value,
                           omega_out,
                           iter,
                           stat,
                           el,
                           canonical_center(Field(g, u), p),
                           WaveProfile{wave_phi, wp, el, iter, SolveRoute::QuotientMax}};
}

Real find_alpha_for_omega(const Grid& g, Real omega, Real p, const SolverConfig& config,
                          std::optional<MaximizerReport>* out) {
    if (!(omega > 0)) throw std::invalid_argument("find_alpha_for_omega: omega must be positive");
    std::vector<std::pair<Real, Real>> seen;  // (alpha, omega_alpha)
    std::optional<Field> warm;
    auto eval = [&](Real alpha) {
        MaximizerReport rep = maximize_quotient(g, QuotientProblem::GN, alpha, p, config, warm);
        warm = rep.maximizer;
        seen.emplace_back(alpha, rep.omega);
        std::sort(seen.begin(), seen.end());
        for (size_t i = 1; i < seen.size(); ++i)
            if (seen[i].second <= seen[i - 1].second)
                throw IllPosed("find_alpha_for_omega: omega(alpha) is not monotone on the bracket");
        if (out) *out = rep;
        return rep.omega;
    };

    Real hi = 2.0 * omega / p;
    Real w_hi = eval(hi);
    while (w_hi < omega) {
        hi *= 2.0;
        w_hi = eval(hi);
        if (hi > 1e8) throw NonConvergence("find_alpha_for_omega: no upper bracket", 0, w_hi);
    }
    Real lo = hi / 2.0;
    Real w_lo = eval(lo);
    while (w_lo > omega) {
        lo /= 2.0;
        w_lo = eval(lo);
        if (lo < 1e-12) throw NonConvergence("find_alpha_for_omega: no lower bracket", 0, w_lo);
    }
    Real alpha = lo, w_mid = w_lo;
    for (int it = 0; it < 200; ++it) {
        alpha = 0.5 * (lo + hi);
        w_mid = eval(alpha);
        if (std::abs(w_mid - omega) <= 1e-8) return alpha;
        (w_mid < omega ? lo : hi) = alpha;
        if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
    }
    if (std::abs(w_mid - omega) > 1e-8)
        throw NonConvergence("find_alpha_for_omega: bisection stalled", 0, w_mid - omega);
    return alpha;
}

WaveProfile solve_profile(const Grid& g, const WaveParams& params, const SolverConfig& config) {
    try {
        return solve_fixed_point(g, params, config);
    } catch (const NonConvergence&) {
    } catch (const CollapseToZero&) {
    }
    // Fall back to the variational route at the same speed.
    SolverConfig fallback = config;
    fallback.seed.kind = SeedKind::Green;
    if (params.p <= 6) {
        std::optional<MaximizerReport> rep;
        find_alpha_for_omega(g, params.omega, params.p, fallback, &rep);
        WaveProfile wave = rep->wave;
        wave.params = params;
        wave.residual = profile_residual(wave.phi, params);
        return wave;
    }
    MaximizerReport rep =
        maximize_quotient(g, QuotientProblem::Sobolev, params.omega, params.p, fallback);
    return rep.wave;
}

DecayReport decay_constant(const Field& phi) {
    const Grid& g = phi.grid;
    const Real L = g.half_length;
    const Real peak = norm_sup(phi);
    if (!(peak > 0)) throw RangeError("decay_constant: zero profile");

    DecayReport rep;
    rep.window_lo = L / 4.0;
    rep.window_hi = L / 2.0;

    Real at_quarter = 0;
    for (int j = 0; j < g.n; ++j)
        if (std::abs(std::abs(g.x[j]) - L / 4.0) <= g.dx / 2.0)
            at_quarter = std::max(at_quarter, std::abs(phi.values[j]));
    if (at_quarter > 0.1 * peak)
        throw RangeError("decay_constant: profile has not reached its tail at |x| = L/4");

    std::vector<Real> w;
    for (int j = 0; j < g.n; ++j) {
        const Real ax = std::abs(g.x[j]);
        if (ax >= rep.window_lo && ax <= rep.window_hi)
            w.push_back(g.x[j] * g.x[j] * std::abs(phi.values[j]));
    }
    if (w.empty()) throw RangeError("decay_constant: empty tail window");
    std::vector<Real> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    rep.k_estimate = sorted[sorted.size() / 2];
    const Real lo = sorted.front(), hiv = sorted.back();
    rep.plateau_variation =
        lo > 0 ? hiv / lo - 1.0 : std::numeric_limits<Real>::infinity();
    return rep;
}

DecayReport decay_constant(const WaveProfile& wave) { return decay_constant(wave.phi); }

std::vector<SweepRow> sweep_alpha(const Grid& g, const std::vector<Real>& alphas, Real p,
                                  const SolverConfig& config) {
    std::vector<SweepRow> rows;
    std::optional<Field> warm;
    for (Real alpha : alphas) {
        SweepRow row;
        row.alpha = alpha;
        try {
            MaximizerReport rep = maximize_quotient(g, QuotientProblem::GN, alpha, p, config, warm);
            warm = rep.maximizer;
            row.quotient = rep.quotient_value;
            row.wave_norm = norm_l2(rep.wave.phi);
            row.omega = rep.omega;
            row.status = "ok";
        } catch (const std::exception& ex) {
            row.quotient = row.wave_norm = row.omega = std::numeric_limits<Real>::quiet_NaN();
            row.status = ex.what();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace benj
