// slicemkt: market equilibria for two operators sharing a sliced network
// modeled as an M/M/1-DPS queue. Batch front-end: single-point evaluation,
// parameter sweeps to CSV (optionally rendered to SVG), and the validating
// queue simulator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slicemkt/csv.hpp"
#include "slicemkt/feasibility.hpp"
#include "slicemkt/market.hpp"
#include "slicemkt/queueing.hpp"
#include "slicemkt/simulate.hpp"
#include "slicemkt/stage1.hpp"
#include "slicemkt/svg.hpp"
#include "slicemkt/sweep.hpp"
#include "slicemkt/wardrop.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidSpec = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitSimInstability = 4;

void error_line(int code, const std::string& kind, const std::string& detail) {
    std::cerr << "error code=" << code << " kind=" << kind << " detail=\"" << detail
              << "\"\n";
}

/// Axis syntax: "lo:hi:step" (inclusive range) or "v1,v2,..." or a scalar.
std::vector<double> parse_axis(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    if (text.find(':') != std::string::npos) {
        double lo = 0, hi = 0, step = 0;
        char extra = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3 ||
            step <= 0 || hi < lo)
            throw slicemkt::InvalidConfig("bad range '" + text + "' (want lo:hi:step)");
        const int count = static_cast<int>((hi - lo) / step + 1e-9) + 1;
        for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
        if (!out.empty() && hi - out.back() > 1e-12 * std::max(1.0, std::fabs(hi)))
            out.push_back(hi);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str())
            throw slicemkt::InvalidConfig("bad number '" + item + "' in axis");
        out.push_back(v);
    }
    return out;
}

struct CommonOpts {
    double c = 1.0;
    double mu = 1.0;
    double lambda_d = 0.01;
    std::string alpha1 = "0.6";
    std::string alpha2;
    std::string gamma;
    std::string delta;
    std::string out = "-";
    std::string svg;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--c", o.c, "conversion factor c (> 0)");
    cmd->add_option("--mu", o.mu, "service rate mu, packets/s");
    cmd->add_option("--lambda-d", o.lambda_d, "per-subscriber packet rate, packets/s");
    cmd->add_option("--alpha1", o.alpha1, "NO-base delay sensitivity (list for baseline sweeps)");
    cmd->add_option("--alpha2", o.alpha2, "VO-base delay sensitivity (scalar or list)");
    cmd->add_option("--gamma", o.gamma, "VO slice priority weight (scalar, list or lo:hi:step)");
    cmd->add_option("--delta", o.delta, "per-VO-subscriber fee (scalar or list)");
    cmd->add_option("-o,--out", o.out, "output CSV path ('-' = stdout)");
    cmd->add_option("--svg", o.svg, "also render a derivative SVG plot to this path");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

slicemkt::SweepSpec base_spec(const CommonOpts& o) {
    slicemkt::SweepSpec spec;
    auto [q, m] = slicemkt::defaults();
    spec.queue = q;
    spec.market = m;
    spec.queue.mu = o.mu;
    spec.queue.lambda_d = o.lambda_d;
    spec.market.c = o.c;
    spec.alpha1s = parse_axis(o.alpha1);
    if (spec.alpha1s.empty()) spec.alpha1s = {m.alpha1};
    spec.gammas = parse_axis(o.gamma);
    spec.alpha2s = parse_axis(o.alpha2);
    spec.deltas = parse_axis(o.delta);
    spec.threads = o.threads;
    return spec;
}

int write_output(const CommonOpts& o, const std::string& body) {
    if (o.out == "-") {
        std::cout << body;
        return kExitOk;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
        error_line(kExitInvalidSpec, "invalid", "cannot open output file " + o.out);
        return kExitInvalidSpec;
    }
    f << body;
    return kExitOk;
}

void maybe_svg(const CommonOpts& o, slicemkt::SweepKind kind) {
    if (o.svg.empty() || o.out == "-") return;
    using namespace slicemkt;
    const svg::Table t = svg::read_csv(o.out);
    switch (kind) {
        case SweepKind::regionmap:
            svg::write_region_svg(o.svg, t);
            break;
        case SweepKind::baseline:
            svg::write_line_svg(o.svg, t, "alpha1", "pi0_star", {});
            break;
        case SweepKind::monopolistic:
            svg::write_line_svg(o.svg, t, "gamma", "pi_m_star", {"alpha2"});
            break;
        case SweepKind::strategic:
            svg::write_line_svg(o.svg, t, "gamma", "pi1_star", {"alpha2", "delta"});
            break;
        case SweepKind::feasibility:
            svg::write_line_svg(o.svg, t, "gamma", "pi1_star", {"alpha2", "delta"});
            break;
        case SweepKind::sim:
            break;
    }
}

int run_spec(const CommonOpts& o, const slicemkt::SweepSpec& spec) {
    std::ostringstream body;
    slicemkt::SweepOutcome outcome;
    try {
        outcome = slicemkt::run_sweep(spec, body);
    } catch (const slicemkt::InvalidConfig& e) {
        error_line(kExitInvalidSpec, "invalid", e.what());
        return kExitInvalidSpec;
    } catch (const slicemkt::InvalidParams& e) {
        error_line(kExitInvalidSpec, "invalid", e.what());
        return kExitInvalidSpec;
    } catch (const slicemkt::UnstableLoad& e) {
        error_line(kExitSimInstability, "unstable", e.what());
        return kExitSimInstability;
    } catch (const slicemkt::Error& e) {
        error_line(kExitSolverFailure, "solver_failure", e.what());
        return kExitSolverFailure;
    }
    const int rc = write_output(o, body.str());
    if (rc != kExitOk) return rc;
    try {
        maybe_svg(o, spec.kind);
    } catch (const slicemkt::Error& e) {
        error_line(kExitInvalidSpec, "svg", e.what());
        return kExitInvalidSpec;
    }
    if (spec.kind == slicemkt::SweepKind::sim && !outcome.sim_pass) {
        error_line(kExitSimInstability, "sim_mismatch",
                   "simulated means disagree with the closed forms");
        return kExitSimInstability;
    }
    if (outcome.failures > 0) {
        error_line(kExitSolverFailure, "solver_failure",
                   std::to_string(outcome.failures) + " of " +
                       std::to_string(outcome.rows) + " points failed; see status column");
        return kExitSolverFailure;
    }
    return kExitOk;
}

double scalar_or(const std::string& text, double fallback) {
    const std::vector<double> v = parse_axis(text);
    return v.empty() ? fallback : v.front();
}

std::uint64_t to_count(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v) || v > 1e15)
        throw slicemkt::InvalidConfig(std::string(what) + " out of range");
    return static_cast<std::uint64_t>(v);
}

/// Merge a flat key=value config file into argv: `--config FILE` is removed
/// and each file key becomes `--key=value` unless that flag was given
/// explicitly, so flags always override the file.
std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    for (std::size_t i = 1; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i),
                       args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw slicemkt::InvalidConfig("cannot read config file " + config_path);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.pop_back();
        };
        trim(key);
        trim(value);
        if (key.empty()) continue;
        const std::string flag = "--" + key;
        bool given = false;
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        if (!given) injected.push_back(flag + "=" + value);
    }
    // Inject right after the subcommand name (args[1]) so the keys bind to it.
    const std::size_t at = args.size() >= 2 ? 2 : args.size();
    args.insert(args.begin() + static_cast<long>(at), injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Market equilibria for two operators sharing a sliced network "
                 "(M/M/1-DPS model)"};
    app.require_subcommand(1);

    // ---- eval ----------------------------------------------------------
    CommonOpts eval_o;
    std::string eval_scenario = "baseline";
    double eval_p1 = 0.0, eval_p2 = 0.0;
    CLI::App* eval = app.add_subcommand(
        "eval", "solve one scenario at a single parameter point (CSV row to stdout)");
    add_common(eval, eval_o);
    eval->add_option("--scenario", eval_scenario,
                     "baseline | monopolistic | strategic | wardrop");
    eval->add_option("--p1", eval_p1, "price p1 (wardrop only)");
    eval->add_option("--p2", eval_p2, "price p2 (wardrop only)");

    // ---- sweep ---------------------------------------------------------
    CommonOpts sweep_o;
    std::string sweep_scenario = "monopolistic";
    std::string sweep_pgrid;
    double sweep_departures = 100000; // double so 1e6-style values parse
    double sweep_warmup = 0;
    int sweep_reps = 10;
    std::uint64_t sweep_seed = 1;
    double sweep_n1 = 1.0, sweep_n2 = 1.0, sweep_tol = 0.02;
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_common(sweep, sweep_o);
    sweep->add_option("--scenario", sweep_scenario,
                      "baseline | monopolistic | strategic | feasibility | regionmap | sim");
    sweep->add_option("--p-grid", sweep_pgrid, "price grid lo:hi:step (regionmap)");
    sweep->add_option("--departures", sweep_departures, "measured departures (sim)");
    sweep->add_option("--warmup", sweep_warmup, "warm-up departures (sim; 0 = 10%)");
    sweep->add_option("--replications", sweep_reps, "replications (sim)");
    sweep->add_option("--seed", sweep_seed, "RNG master seed (sim)");
    sweep->add_option("--n1", sweep_n1, "class-1 subscriber count (sim)");
    sweep->add_option("--n2", sweep_n2, "class-2 subscriber count (sim)");
    sweep->add_option("--tol-rel", sweep_tol, "relative tolerance for sim validation");

    // ---- regionmap -----------------------------------------------------
    CommonOpts rm_o;
    std::string rm_pgrid = "0:1.2:0.005";
    CLI::App* rm = app.add_subcommand("regionmap",
                                      "classify the (p1, p2) plane into regimes (CSV)");
    add_common(rm, rm_o);
    rm->add_option("--p-grid", rm_pgrid, "price grid lo:hi:step for both axes");

    // ---- sim -----------------------------------------------------------
    CommonOpts sim_o;
    double sim_departures = 100000; // double so 1e6-style values parse
    double sim_warmup = 0;
    int sim_reps = 10;
    std::uint64_t sim_seed = 1;
    double sim_n1 = 1.0, sim_n2 = 1.0, sim_tol = 0.02;
    CLI::App* sim = app.add_subcommand(
        "sim", "simulate the DPS queue and validate the closed-form delays");
    add_common(sim, sim_o);
    sim->add_option("--departures", sim_departures, "measured departures");
    sim->add_option("--warmup", sim_warmup, "warm-up departures (0 = 10%)");
    sim->add_option("--replications", sim_reps, "replications");
    sim->add_option("--seed", sim_seed, "RNG master seed");
    sim->add_option("--n1", sim_n1, "class-1 subscriber count");
    sim->add_option("--n2", sim_n2, "class-2 subscriber count");
    sim->add_option("--tol-rel", sim_tol, "relative tolerance for validation");

    // ---- feasibility ---------------------------------------------------
    CommonOpts feas_o;
    CLI::App* feas = app.add_subcommand(
        "feasibility", "business-model feasibility at one point or over axes (CSV)");
    add_common(feas, feas_o);

    std::vector<std::string> merged;
    try {
        merged = merge_config(argc, argv);
    } catch (const slicemkt::InvalidConfig& e) {
        error_line(kExitInvalidSpec, "invalid", e.what());
        return kExitInvalidSpec;
    }
    try {
        // CLI11's vector overload wants the args reversed, program name excluded.
        std::vector<std::string> rev(merged.rbegin(), merged.rend() - 1);
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        error_line(kExitInvalidSpec, "invalid", e.get_name());
        return kExitInvalidSpec;
    }

    try {
        if (eval->parsed()) {
            using namespace slicemkt;
            SweepSpec spec = base_spec(eval_o);
            QueueConfig q = spec.queue;
            q.gamma = scalar_or(eval_o.gamma, 0.5);
            MarketParams m = spec.market;
            m.alpha1 = spec.alpha1s.front();
            m.alpha2 = scalar_or(eval_o.alpha2, m.alpha2);
            m.delta = scalar_or(eval_o.delta, m.delta);
            std::ostringstream body;
            if (eval_scenario == "wardrop") {
                const WardropOutcome w = wardrop_duopoly(q, m, PricePair{eval_p1, eval_p2});
                body << "c,mu,lambda_d,alpha1,gamma,alpha2,p1,p2,case,n1,n2,u1,u2\n";
                csv::Row row(body);
                row.field(m.c).field(q.mu).field(q.lambda_d).field(m.alpha1).field(q.gamma)
                    .field(m.alpha2).field(eval_p1).field(eval_p2)
                    .field(to_string(w.which)).field(w.n1).field(w.n2)
                    .field(w.u1).field(w.u2);
                row.end();
            } else if (eval_scenario == "baseline" || eval_scenario == "monopolistic" ||
                       eval_scenario == "strategic") {
                spec.kind = eval_scenario == "baseline"     ? SweepKind::baseline
                            : eval_scenario == "monopolistic" ? SweepKind::monopolistic
                                                              : SweepKind::strategic;
                spec.gammas = {q.gamma};
                spec.alpha2s = {m.alpha2};
                spec.deltas = {m.delta};
                spec.alpha1s = {m.alpha1};
                return run_spec(eval_o, spec);
            } else {
                throw InvalidConfig("unknown eval scenario '" + eval_scenario + "'");
            }
            return write_output(eval_o, body.str());
        }

        if (sweep->parsed()) {
            using namespace slicemkt;
            SweepSpec spec = base_spec(sweep_o);
            if (sweep_scenario == "baseline") {
                spec.kind = SweepKind::baseline;
            } else if (sweep_scenario == "monopolistic") {
                spec.kind = SweepKind::monopolistic;
            } else if (sweep_scenario == "strategic") {
                spec.kind = SweepKind::strategic;
            } else if (sweep_scenario == "feasibility") {
                spec.kind = SweepKind::feasibility;
            } else if (sweep_scenario == "regionmap") {
                spec.kind = SweepKind::regionmap;
                spec.p1_grid = parse_axis(sweep_pgrid);
                spec.p2_grid = spec.p1_grid;
            } else if (sweep_scenario == "sim") {
                spec.kind = SweepKind::sim;
                spec.load = Load{sweep_n1, sweep_n2};
                spec.departures = to_count(sweep_departures, "--departures");
                spec.warmup = to_count(sweep_warmup, "--warmup");
                spec.replications = sweep_reps;
                spec.seed = sweep_seed;
                spec.sim_tol_rel = sweep_tol;
            } else {
                throw InvalidConfig("unknown sweep scenario '" + sweep_scenario + "'");
            }
            // Figure-reproduction defaults for omitted axes.
            if (spec.gammas.empty()) spec.gammas = parse_axis("0:1:0.02");
            if (spec.alpha2s.empty()) spec.alpha2s = {0.2, 0.4, 0.6, 0.8, 1.0};
            if (spec.deltas.empty()) spec.deltas = {0.05, 0.10, 0.15, 0.20};
            return run_spec(sweep_o, spec);
        }

        if (rm->parsed()) {
            using namespace slicemkt;
            SweepSpec spec = base_spec(rm_o);
            spec.kind = SweepKind::regionmap;
            spec.p1_grid = parse_axis(rm_pgrid);
            spec.p2_grid = spec.p1_grid;
            if (spec.gammas.empty()) spec.gammas = {0.1};
            if (spec.alpha2s.empty()) spec.alpha2s = {0.8};
            return run_spec(rm_o, spec);
        }

        if (sim->parsed()) {
            using namespace slicemkt;
            SweepSpec spec = base_spec(sim_o);
            spec.kind = SweepKind::sim;
            spec.load = Load{sim_n1, sim_n2};
            spec.departures = to_count(sim_departures, "--departures");
            spec.warmup = to_count(sim_warmup, "--warmup");
            spec.replications = sim_reps;
            spec.seed = sim_seed;
            spec.sim_tol_rel = sim_tol;
            if (spec.gammas.empty()) spec.gammas = {spec.queue.gamma};
            return run_spec(sim_o, spec);
        }

        if (feas->parsed()) {
            using namespace slicemkt;
            SweepSpec spec = base_spec(feas_o);
            spec.kind = SweepKind::feasibility;
            if (spec.gammas.empty()) spec.gammas = {spec.queue.gamma};
            if (spec.alpha2s.empty()) spec.alpha2s = {spec.market.alpha2};
            if (spec.deltas.empty()) spec.deltas = {spec.market.delta};
            return run_spec(feas_o, spec);
        }
    } catch (const slicemkt::InvalidConfig& e) {
        error_line(kExitInvalidSpec, "invalid", e.what());
        return kExitInvalidSpec;
    } catch (const slicemkt::InvalidParams& e) {
        error_line(kExitInvalidSpec, "invalid", e.what());
        return kExitInvalidSpec;
    } catch (const slicemkt::UnstableLoad& e) {
        error_line(kExitSimInstability, "unstable", e.what());
        return kExitSimInstability;
    } catch (const slicemkt::Error& e) {
        error_line(kExitSolverFailure, "solver_failure", e.what());
        return kExitSolverFailure;
    }
    return kExitOk;
}
