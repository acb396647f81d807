// Command-line front end: every library entry point behind a subcommand,
// with deterministic artifacts (CSV fields, 17-digit JSON reports) plus a
// manifest.json recording what ran and what it produced.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "benj/errors.hpp"
#include "benj/evolution.hpp"
#include "benj/functionals.hpp"
#include "benj/io.hpp"
#include "benj/linearized.hpp"
#include "benj/solver.hpp"
#include "benj/spectral.hpp"
#include "benj/stability.hpp"

namespace {

using benj::Real;

struct Options {
    int n = 2048;
    double half_length_factor = 25.0;  // L = factor * pi
    double omega = 1.0;
    double p = 3.0;
    double alpha = 1.0;
    double c = 1.0;
    double gamma = 2.0;
    double tol = 1e-10;
    int max_iter = 2000;
    std::string route = "fixedpoint";
    std::string problem = "gn";
    double dt = 0.0;
    double t_final = 1.0;
    double eps = 1e-3;
    std::uint64_t seed = 1;
    std::string direction = "noise";
    std::string in_path;
    std::vector<double> alphas{0.25, 0.5, 1.0, 2.0, 4.0};
    std::string out = ".";
    std::string config_path;
};

// Registered options per subcommand, so a JSON --config can fill in anything
// the command line left at its default.
struct OptionSet {
    CLI::App* cmd;
    std::map<std::string, CLI::Option*> named;

    CLI::Option* add(const std::string& name, CLI::Option* opt) {
        named[name] = opt;
        return opt;
    }
};

void merge_config(OptionSet& os, Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
    nlohmann::json cfg = nlohmann::json::parse(in);

    auto fresh = [&](const char* key) {
        auto it = os.named.find(key);
        return cfg.contains(key) && it != os.named.end() && it->second->count() == 0;
    };
    if (fresh("n")) o.n = cfg["n"].get<int>();
    if (fresh("L")) o.half_length_factor = cfg["L"].get<double>();
    if (fresh("omega")) o.omega = cfg["omega"].get<double>();
    if (fresh("p")) o.p = cfg["p"].get<double>();
    if (fresh("alpha")) o.alpha = cfg["alpha"].get<double>();
    if (fresh("c")) o.c = cfg["c"].get<double>();
    if (fresh("gamma")) o.gamma = cfg["gamma"].get<double>();
    if (fresh("tol")) o.tol = cfg["tol"].get<double>();
    if (fresh("max-iter")) o.max_iter = cfg["max-iter"].get<int>();
    if (fresh("route")) o.route = cfg["route"].get<std::string>();
    if (fresh("problem")) o.problem = cfg["problem"].get<std::string>();
    if (fresh("dt")) o.dt = cfg["dt"].get<double>();
    if (fresh("t-final")) o.t_final = cfg["t-final"].get<double>();
    if (fresh("eps")) o.eps = cfg["eps"].get<double>();
    if (fresh("seed")) o.seed = cfg["seed"].get<std::uint64_t>();
    if (fresh("direction")) o.direction = cfg["direction"].get<std::string>();
    if (fresh("in")) o.in_path = cfg["in"].get<std::string>();
    if (fresh("alphas")) o.alphas = cfg["alphas"].get<std::vector<double>>();
    if (fresh("out")) o.out = cfg["out"].get<std::string>();
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

benj::Json options_json(const std::string& command, const Options& o) {
    using benj::Json;
    Json j = Json::object();
    j.set("n", Json::integer(o.n));
    j.set("half_length", Json::real(o.half_length_factor * EIGEN_PI));
    j.set("omega", Json::real(o.omega));
    j.set("p", Json::real(o.p));
    j.set("tol", Json::real(o.tol));
    j.set("max_iter", Json::integer(o.max_iter));
    j.set("route", Json::str(o.route));
    if (command == "maximize" || command == "sweep") {
        j.set("problem", Json::str(o.problem));
        j.set("alpha", Json::real(o.alpha));
    }
    if (command == "physical") {
        j.set("c", Json::real(o.c));
        j.set("gamma", Json::real(o.gamma));
    }
    if (command == "evolve" || command == "perturb") {
        j.set("dt", Json::real(o.dt));
        j.set("t_final", Json::real(o.t_final));
    }
    if (command == "perturb") {
        j.set("eps", Json::real(o.eps));
        j.set("seed", Json::integer(static_cast<long long>(o.seed)));
        j.set("direction", Json::str(o.direction));
    }
    if (command == "evolve" && !o.in_path.empty()) j.set("in", Json::str(o.in_path));
    if (command == "sweep") {
        j.set("alphas", Json::real_array(std::vector<Real>(o.alphas.begin(), o.alphas.end())));
    }
    j.set("out", Json::str(o.out));
    return j;
}

struct RunContext {
    std::string command;
    Options opts;
    std::filesystem::path dir;
    std::vector<std::string> artifacts;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    std::string started_at = utc_now();

    explicit RunContext(std::string cmd, const Options& o) : command(std::move(cmd)), opts(o), dir(o.out) {
        std::filesystem::create_directories(dir);
    }

    std::string path(const std::string& name) {
        artifacts.push_back(name);
        return (dir / name).string();
    }

    void finish(const std::string& status) {
        using benj::Json;
        const double dur =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        Json m = Json::object();
        m.set("command", Json::str(command));
        m.set("config", options_json(command, opts));
        m.set("started_at", Json::str(started_at));
        m.set("duration_s", Json::real(dur));
        Json files = Json::array();
        for (const auto& a : artifacts) files.push(Json::str(a));
        m.set("artifact_files", files);
        m.set("status", Json::str(status));
        benj::write_text_file((dir / "manifest.json").string(), m.dump() + "\n");
    }
};

benj::Grid grid_of(const Options& o) {
    return benj::make_grid(o.n, o.half_length_factor * EIGEN_PI);
}

benj::SolverConfig solver_config(const Options& o) {
    benj::SolverConfig sc;
    sc.tol = o.tol;
    sc.max_iter = o.max_iter;
    return sc;
}

benj::WaveProfile solve_wave(const benj::Grid& g, const Options& o) {
    const benj::WaveParams params(o.omega, o.p);
    const benj::SolverConfig sc = solver_config(o);
    if (o.route == "quotient")
        return benj::maximize_quotient(g, benj::QuotientProblem::Sobolev, o.omega, o.p, sc).wave;
    return benj::solve_fixed_point(g, params, sc);
}

benj::Json wave_json(const benj::WaveProfile& w) {
    using benj::Json;
    Json j = Json::object();
    j.set("omega", Json::real(w.params.omega));
    j.set("p", Json::real(w.params.p));
    j.set("route", Json::str(benj::route_name(w.route)));
    j.set("iterations", Json::integer(w.iterations));
    j.set("residual", Json::real(w.residual));
    j.set("peak", Json::real(w.phi.values.maxCoeff()));
    j.set("l2_norm", Json::real(benj::norm_l2(w.phi)));
    j.set("even_defect", Json::real(benj::even_defect(w.phi)));
    const benj::Invariants inv = benj::invariants(w.phi, w.params);
    Json ji = Json::object();
    ji.set("mass", Json::real(inv.mass));
    ji.set("l2", Json::real(inv.l2));
    ji.set("hamiltonian", Json::real(inv.hamiltonian));
    j.set("invariants", ji);
    return j;
}

benj::Json pohozaev_json(const benj::Field& phi, const benj::WaveParams& params) {
    using benj::Json;
    const benj::PohozaevResiduals pr = benj::pohozaev_residuals(phi, params);
    Json j = Json::object();
    j.set("r1", Json::real(pr.r1));
    j.set("r2", Json::real(pr.r2));
    j.set("relative", Json::real(pr.relative));
    return j;
}

benj::Json ground_json(const benj::GroundStateReport& gs) {
    using benj::Json;
    Json j = Json::object();
    j.set("morse_index", Json::integer(gs.morse_index));
    j.set("kernel_dim", Json::integer(gs.kernel_dim));
    j.set("kappa", Json::real(gs.kappa));
    j.set("lambda_min", Json::real(gs.lambda_min));
    j.set("kernel_eigenvalue", Json::real(gs.kernel_eigenvalue));
    j.set("kernel_cosine", Json::real(gs.kernel_cosine));
    j.set("projected_min", Json::real(gs.projected_min));
    return j;
}

benj::Json spectrum_json(const benj::SpectrumReport& sr, std::size_t top = 16) {
    using benj::Json;
    Json j = Json::object();
    j.set("max_real_part", Json::real(sr.max_real_part));
    j.set("threshold", Json::real(sr.threshold));
    j.set("symmetry_defect", Json::real(sr.symmetry_defect));
    j.set("zero_cosine", Json::real(sr.zero_cosine));
    j.set("count_real_unstable", Json::integer(sr.count_real_unstable));
    j.set("count_quadruples", Json::integer(sr.count_quadruples));
    Json eigs = Json::array();
    for (std::size_t i = 0; i < sr.eigenvalues.size() && i < top; ++i) {
        Json e = Json::object();
        e.set("re", Json::real(sr.eigenvalues[i].real()));
        e.set("im", Json::real(sr.eigenvalues[i].imag()));
        eigs.push(e);
    }
    j.set("leading_eigenvalues", eigs);
    return j;
}

void write_frames_csv(const std::string& path, const std::vector<benj::Frame>& frames) {
    std::string out = "t,mass,l2,hamiltonian\n";
    for (const auto& f : frames) {
        out += benj::format_real(f.time) + "," + benj::format_real(f.invariants.mass) + "," +
               benj::format_real(f.invariants.l2) + "," +
               benj::format_real(f.invariants.hamiltonian) + "\n";
    }
    benj::write_text_file(path, out);
}

int run_solve(RunContext& ctx) {
    const benj::Grid g = grid_of(ctx.opts);
    const benj::WaveProfile w = solve_wave(g, ctx.opts);
    benj::write_field_csv(ctx.path("wave.csv"), w.phi);
    ctx.artifacts.push_back("wave.csv.json");
    benj::Json j = wave_json(w);
    j.set("pohozaev", pohozaev_json(w.phi, w.params));
    const benj::DecayReport dr = benj::decay_constant(w);
    benj::Json jd = benj::Json::object();
    jd.set("k_estimate", benj::Json::real(dr.k_estimate));
    jd.set("window_lo", benj::Json::real(dr.window_lo));
    jd.set("window_hi", benj::Json::real(dr.window_hi));
    jd.set("plateau_variation", benj::Json::real(dr.plateau_variation));
    j.set("decay", jd);
    benj::write_text_file(ctx.path("solve.json"), j.dump() + "\n");
    std::printf("solve: omega=%g p=%g residual=%.3e iterations=%d peak=%.6f\n",
                w.params.omega, w.params.p, w.residual, w.iterations, w.phi.values.maxCoeff());
    return 0;
}

int run_maximize(RunContext& ctx) {
    using benj::Json;
    const Options& o = ctx.opts;
    const benj::Grid g = grid_of(o);
    const bool gn = o.problem == "gn";
    const benj::MaximizerReport rep =
        benj::maximize_quotient(g, gn ? benj::QuotientProblem::GN : benj::QuotientProblem::Sobolev,
                                gn ? o.alpha : o.omega, o.p, solver_config(o));
    benj::write_field_csv(ctx.path("maximizer.csv"), rep.maximizer);
    ctx.artifacts.push_back("maximizer.csv.json");
    benj::write_field_csv(ctx.path("wave.csv"), rep.wave.phi);
    ctx.artifacts.push_back("wave.csv.json");
    Json j = Json::object();
    j.set("problem", Json::str(gn ? "gn" : "sobolev"));
    j.set("p", Json::real(rep.p));
    if (gn) j.set("alpha", Json::real(rep.alpha));
    j.set("quotient_value", Json::real(rep.quotient_value));
    j.set("omega", Json::real(rep.omega));
    j.set("iterations", Json::integer(rep.iterations));
    j.set("stationarity", Json::real(rep.stationarity));
    j.set("el_residual", Json::real(rep.el_residual));
    j.set("wave", wave_json(rep.wave));
    benj::write_text_file(ctx.path("maximize.json"), j.dump() + "\n");
    std::printf("maximize: %s quotient=%.9f omega=%g iterations=%d stationarity=%.3e\n",
                gn ? "gn" : "sobolev", rep.quotient_value, rep.omega, rep.iterations,
                rep.stationarity);
    return 0;
}

int run_pohozaev(RunContext& ctx) {
    const benj::Grid g = grid_of(ctx.opts);
    const benj::WaveProfile w = solve_wave(g, ctx.opts);
    benj::Json j = pohozaev_json(w.phi, w.params);
    j.set("solver_residual", benj::Json::real(w.residual));
    benj::write_text_file(ctx.path("pohozaev.json"), j.dump() + "\n");
    const benj::PohozaevResiduals pr = benj::pohozaev_residuals(w.phi, w.params);
    std::printf("pohozaev: r1=%.3e r2=%.3e relative=%.3e\n", pr.r1, pr.r2, pr.relative);
    return 0;
}

int run_linop(RunContext& ctx) {
    using benj::Json;
    const benj::Grid g = grid_of(ctx.opts);
    const benj::WaveProfile w = solve_wave(g, ctx.opts);
    const benj::OperatorMatrix op = benj::assemble_lplus(w);
    const benj::EigenDecomposition dec = benj::decompose(op);
    const benj::GroundStateReport gs = benj::morse_index(op, dec);

    std::string csv = "index,eigenvalue\n";
    for (int i = 0; i < dec.values.size(); ++i)
        csv += std::to_string(i) + "," + benj::format_real(dec.values[i]) + "\n";
    benj::write_text_file(ctx.path("eigenvalues.csv"), csv);

    Json j = Json::object();
    j.set("ground_state", ground_json(gs));
    j.set("kernel_residual", Json::real(benj::kernel_residual(w)));
    j.set("dprime", Json::real(benj::dprime(op, dec)));
    const benj::EtaReport eta = benj::eta_test(w);
    Json je = Json::object();
    je.set("numeric", Json::real(eta.numeric));
    je.set("closed_form", Json::real(eta.closed_form));
    je.set("identity_residual", Json::real(eta.identity_residual));
    je.set("orthogonality", Json::real(eta.orthogonality));
    je.set("truncation_limited", Json::boolean(eta.truncation_limited));
    j.set("eta", je);
    j.set("wave", wave_json(w));
    benj::write_text_file(ctx.path("linop.json"), j.dump() + "\n");
    std::printf("linop: morse_index=%d kernel_dim=%d lambda_min=%.6f kernel_residual=%.3e\n",
                gs.morse_index, gs.kernel_dim, gs.lambda_min, benj::kernel_residual(w));
    return 0;
}

int run_spectrum(RunContext& ctx) {
    const benj::Grid g = grid_of(ctx.opts);
    const benj::WaveProfile w = solve_wave(g, ctx.opts);
    const benj::SpectrumReport sr = benj::kdv_spectrum(w);
    std::string csv = "re,im\n";
    for (const auto& l : sr.eigenvalues)
        csv += benj::format_real(l.real()) + "," + benj::format_real(l.imag()) + "\n";
    benj::write_text_file(ctx.path("spectrum.csv"), csv);
    benj::write_text_file(ctx.path("spectrum.json"), spectrum_json(sr).dump() + "\n");
    std::printf("spectrum: max_real=%.6e threshold=%.3e real_unstable=%d quadruples=%d\n",
                sr.max_real_part, sr.threshold, sr.count_real_unstable, sr.count_quadruples);
    return 0;
}

int run_index(RunContext& ctx) {
    using benj::Json;
    const benj::Grid g = grid_of(ctx.opts);
    const benj::WaveProfile w = solve_wave(g, ctx.opts);
    const benj::IndexReport rep = benj::index_count(w);
    Json j = Json::object();
    j.set("n_lplus", Json::integer(rep.n_lplus));
    j.set("n_d", Json::integer(rep.n_d));
    j.set("rhs", Json::integer(rep.rhs));
    j.set("dprime", Json::real(rep.dprime_value));
    j.set("projected_min", Json::real(rep.projected_min));
    j.set("k_r_observed", Json::integer(rep.k_r_observed));
    j.set("k_c_observed", Json::integer(rep.k_c_observed));
    j.set("max_real_part", Json::real(rep.max_real_part));
    j.set("threshold", Json::real(rep.threshold));
    j.set("verdict", Json::str(benj::verdict_name(rep.verdict)));
    j.set("ground_state", ground_json(rep.ground));
    j.set("spectrum", spectrum_json(rep.spectrum));
    benj::write_text_file(ctx.path("index.json"), j.dump() + "\n");
    std::printf("index: n(Lplus)=%d n(D)=%d rhs=%d dprime=%.6e verdict=%s\n", rep.n_lplus,
                rep.n_d, rep.rhs, rep.dprime_value, benj::verdict_name(rep.verdict).c_str());
    return 0;
}

int run_evolve(RunContext& ctx) {
    using benj::Json;
    const Options& o = ctx.opts;
    const benj::Grid g = grid_of(o);
    const benj::WaveParams params(o.omega, o.p);
    benj::Field u0 = o.in_path.empty() ? solve_wave(g, o).phi : benj::read_field_csv(o.in_path);
    benj::EvolveConfig ec;
    ec.dt = o.dt;
    ec.t_final = o.t_final;
    ec.save_every = 1;
    const benj::EvolveResult res = benj::evolve(u0, params, ec);
    benj::write_field_csv(ctx.path("final.csv"), res.final_state);
    ctx.artifacts.push_back("final.csv.json");
    write_frames_csv(ctx.path("invariants.csv"), res.frames);
    const benj::AlignedDistance ad = benj::aligned_distance(res.final_state, u0);
    Json j = Json::object();
    j.set("dt_used", Json::real(res.dt_used));
    j.set("steps", Json::integer(res.steps));
    j.set("mass_drift", Json::real(res.mass_drift));
    j.set("l2_drift", Json::real(res.l2_drift));
    j.set("hamiltonian_drift", Json::real(res.hamiltonian_drift));
    j.set("aborted", Json::boolean(res.aborted));
    if (res.aborted) {
        j.set("abort_time", Json::real(res.abort_time));
        j.set("abort_reason", Json::str(res.abort_reason));
    }
    j.set("aligned_distance_to_initial", Json::real(ad.distance));
    j.set("aligned_shift", Json::real(ad.shift));
    benj::write_text_file(ctx.path("evolve.json"), j.dump() + "\n");
    std::printf("evolve: steps=%ld dt=%.3e drifts mass=%.3e l2=%.3e H=%.3e%s\n", res.steps,
                res.dt_used, res.mass_drift, res.l2_drift, res.hamiltonian_drift,
                res.aborted ? " [aborted]" : "");
    return res.aborted ? 1 : 0;
}

int run_perturb(RunContext& ctx) {
    using benj::Json;
    const Options& o = ctx.opts;
    const benj::Grid g = grid_of(o);
    const benj::WaveProfile w = solve_wave(g, o);

    benj::PerturbConfig pc;
    pc.eps = o.eps;
    pc.seed = o.seed;
    pc.evolve.dt = o.dt;
    pc.evolve.t_final = o.t_final;

    benj::GrowthReport rep;
    if (o.direction == "eigen") {
        const benj::SpectrumReport sr = benj::kdv_spectrum(w);
        if (sr.unstable_modes.empty())
            throw benj::RangeError("perturb: no unstable mode to follow; use --direction noise");
        pc.kind = benj::PerturbationKind::EigenDirection;
        const benj::Vec dir = sr.unstable_modes.front().real_part;
        rep = benj::perturbation_experiment(w, pc, &dir, sr.max_real_part);
    } else {
        rep = benj::perturbation_experiment(w, pc);
    }

    std::string csv = "t,distance\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        csv += benj::format_real(rep.times[i]) + "," + benj::format_real(rep.distances[i]) + "\n";
    benj::write_text_file(ctx.path("growth.csv"), csv);

    Json j = Json::object();
    j.set("direction", Json::str(o.direction));
    j.set("eps", Json::real(o.eps));
    j.set("seed", Json::integer(static_cast<long long>(o.seed)));
    j.set("lambda_fit", Json::real(rep.lambda_fit));
    j.set("fit_t0", Json::real(rep.fit_t0));
    j.set("fit_t1", Json::real(rep.fit_t1));
    j.set("fit_r2", Json::real(rep.fit_r2));
    j.set("fit_valid", Json::boolean(rep.fit_valid));
    j.set("no_growth", Json::boolean(rep.no_growth));
    j.set("reference_lambda", Json::real(rep.reference_lambda));
    benj::write_text_file(ctx.path("perturb.json"), j.dump() + "\n");
    std::printf("perturb: eps=%g no_growth=%d lambda_fit=%.6e reference=%.6e\n", o.eps,
                rep.no_growth ? 1 : 0, rep.lambda_fit, rep.reference_lambda);
    return 0;
}

int run_sweep(RunContext& ctx) {
    using benj::Json;
    const Options& o = ctx.opts;
    const benj::Grid g = grid_of(o);
    const std::vector<Real> alphas(o.alphas.begin(), o.alphas.end());
    const std::vector<benj::SweepRow> rows = benj::sweep_alpha(g, alphas, o.p, solver_config(o));
    std::string csv = "alpha,quotient,wave_norm,omega,status\n";
    for (const auto& r : rows)
        csv += benj::format_real(r.alpha) + "," + benj::format_real(r.quotient) + "," +
               benj::format_real(r.wave_norm) + "," + benj::format_real(r.omega) + "," + r.status +
               "\n";
    benj::write_text_file(ctx.path("sweep.csv"), csv);

    bool quotient_decreasing = true, norm_increasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].status != "ok" || rows[i - 1].status != "ok") continue;
        quotient_decreasing &= rows[i].quotient < rows[i - 1].quotient;
        norm_increasing &= rows[i].wave_norm > rows[i - 1].wave_norm;
    }
    Json j = Json::object();
    j.set("p", Json::real(o.p));
    j.set("quotient_strictly_decreasing", Json::boolean(quotient_decreasing));
    j.set("wave_norm_strictly_increasing", Json::boolean(norm_increasing));
    benj::write_text_file(ctx.path("sweep.json"), j.dump() + "\n");
    std::printf("sweep: %zu alphas, quotient decreasing=%d, norm increasing=%d\n", rows.size(),
                quotient_decreasing ? 1 : 0, norm_increasing ? 1 : 0);
    return 0;
}

int run_greens(RunContext& ctx) {
    const benj::Grid g = grid_of(ctx.opts);
    const benj::Field G = benj::greens_function(g, ctx.opts.omega);
    benj::write_field_csv(ctx.path("greens.csv"), G);
    ctx.artifacts.push_back("greens.csv.json");
    const benj::DecayReport dr = benj::decay_constant(G);
    benj::Json j = benj::Json::object();
    j.set("omega", benj::Json::real(ctx.opts.omega));
    j.set("value_at_zero", benj::Json::real(G.values[g.n / 2]));
    j.set("tail_constant", benj::Json::real(dr.k_estimate));
    j.set("plateau_variation", benj::Json::real(dr.plateau_variation));
    benj::write_text_file(ctx.path("greens.json"), j.dump() + "\n");
    std::printf("greens: omega=%g G(0)=%.6f x^2 tail=%.6f (variation %.3f)\n", ctx.opts.omega,
                G.values[g.n / 2], dr.k_estimate, dr.plateau_variation);
    return 0;
}

int run_physical(RunContext& ctx) {
    const Options& o = ctx.opts;
    const Real omega = benj::physical_to_normalized({o.c, o.gamma});
    benj::Json j = benj::Json::object();
    j.set("c", benj::Json::real(o.c));
    j.set("gamma", benj::Json::real(o.gamma));
    j.set("omega", benj::Json::real(omega));
    j.set("instability_margin", benj::Json::real(benj::instability_margin(omega, o.p)));
    benj::write_text_file(ctx.path("physical.json"), j.dump() + "\n");
    std::printf("physical: c=%g gamma=%g -> omega=%.9f margin=%.6f\n", o.c, o.gamma, omega,
                benj::instability_margin(omega, o.p));
    return 0;
}

void add_grid_options(OptionSet& os, Options& o) {
    os.add("n", os.cmd->add_option("--n", o.n, "grid points (power of two)"));
    os.add("L", os.cmd->add_option("--L", o.half_length_factor, "half length as a multiple of pi"));
}

void add_wave_options(OptionSet& os, Options& o) {
    os.add("omega", os.cmd->add_option("--omega", o.omega, "wave speed parameter (> 0)"));
    os.add("p", os.cmd->add_option("--p", o.p, "nonlinearity power (> 2)"));
    os.add("tol", os.cmd->add_option("--tol", o.tol, "solver tolerance"));
    os.add("max-iter", os.cmd->add_option("--max-iter", o.max_iter, "iteration cap"));
    os.add("route", os.cmd->add_option("--route", o.route, "fixedpoint | quotient")
                        ->check(CLI::IsMember({"fixedpoint", "quotient"})));
}

void add_common(OptionSet& os, Options& o) {
    add_grid_options(os, o);
    add_wave_options(os, o);
    os.add("out", os.cmd->add_option("--out", o.out, "output directory"));
    os.add("config", os.cmd->add_option("--config", o.config_path, "JSON file with option defaults"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"travelling waves of the generalized Benjamin equation: profiles, "
                 "linearization, spectra, and time evolution"};
    app.require_subcommand(1);
    Options o;

    std::map<std::string, std::pair<OptionSet, int (*)(RunContext&)>> commands;
    auto sub = [&](const char* name, const char* help, int (*fn)(RunContext&)) -> OptionSet& {
        OptionSet os{app.add_subcommand(name, help), {}};
        commands.emplace(name, std::make_pair(os, fn));
        return commands.at(name).first;
    };

    {
        OptionSet& s = sub("solve", "compute a travelling-wave profile", run_solve);
        add_common(s, o);
    }
    {
        OptionSet& s = sub("maximize", "maximize a variational quotient", run_maximize);
        add_common(s, o);
        s.add("problem", s.cmd->add_option("--problem", o.problem, "gn | sobolev")
                             ->check(CLI::IsMember({"gn", "sobolev"})));
        s.add("alpha", s.cmd->add_option("--alpha", o.alpha, "interpolation multiplier (gn)"));
    }
    {
        OptionSet& s = sub("pohozaev", "solve and report the variational identities", run_pohozaev);
        add_common(s, o);
    }
    {
        OptionSet& s = sub("linop", "linearized-operator diagnostics", run_linop);
        add_common(s, o);
    }
    {
        OptionSet& s = sub("spectrum", "eigenvalues of dx Lplus (dense)", run_spectrum);
        add_common(s, o);
    }
    {
        OptionSet& s = sub("index", "stability index count and verdict", run_index);
        add_common(s, o);
    }
    {
        OptionSet& s = sub("evolve", "integrate the evolution equation", run_evolve);
        add_common(s, o);
        s.add("dt", s.cmd->add_option("--dt", o.dt, "time step (<= 0 uses the CFL bound)"));
        s.add("t-final", s.cmd->add_option("--t-final", o.t_final, "integration time"));
        s.add("in", s.cmd->add_option("--in", o.in_path, "initial data CSV (default: the wave)"));
    }
    {
        OptionSet& s = sub("perturb", "perturbation growth experiment", run_perturb);
        add_common(s, o);
        s.add("dt", s.cmd->add_option("--dt", o.dt, "time step (<= 0 uses the CFL bound)"));
        s.add("t-final", s.cmd->add_option("--t-final", o.t_final, "integration time"));
        s.add("eps", s.cmd->add_option("--eps", o.eps, "perturbation amplitude"));
        s.add("seed", s.cmd->add_option("--seed", o.seed, "noise seed"));
        s.add("direction", s.cmd->add_option("--direction", o.direction, "noise | eigen")
                               ->check(CLI::IsMember({"noise", "eigen"})));
    }
    {
        OptionSet& s = sub("sweep", "quotient sweep over alpha", run_sweep);
        add_common(s, o);
        s.add("alphas", s.cmd->add_option("--alphas", o.alphas, "alpha values")->delimiter(','));
    }
    {
        OptionSet& s = sub("greens", "Green's function of (D-1)^2 + omega", run_greens);
        add_common(s, o);
    }
    {
        OptionSet& s = sub("physical", "physical (c, gamma) to normalized omega", run_physical);
        OptionSet& os = s;
        os.add("c", os.cmd->add_option("--c", o.c, "physical wave speed"));
        os.add("gamma", os.cmd->add_option("--gamma", o.gamma, "dispersion coefficient"));
        os.add("p", os.cmd->add_option("--p", o.p, "nonlinearity power"));
        os.add("out", os.cmd->add_option("--out", o.out, "output directory"));
        os.add("config", os.cmd->add_option("--config", o.config_path, "JSON option defaults"));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (auto& [name, entry] : commands) {
        if (!entry.first.cmd->parsed()) continue;
        try {
            merge_config(entry.first, o);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
        RunContext ctx(name, o);
        try {
            const int rc = entry.second(ctx);
            ctx.finish(rc == 0 ? "ok" : "aborted");
            return rc;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            ctx.finish(std::string("error: ") + e.what());
            return 1;
        }
    }
    return 2;
}
