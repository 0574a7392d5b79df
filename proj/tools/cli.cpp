#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace ifr::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double number_at(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw UsageError(std::string("config: '") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::pair<double, double> pair_at(const json& j, const char* key, std::pair<double, double> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw UsageError(std::string("config: '") + key + "' must be a pair of numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Eigen::Index> parse_mr_list(const std::string& text) {
    std::vector<Eigen::Index> list;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw UsageError("--mr-list: '" + item + "' is not an integer");
        list.push_back(static_cast<Eigen::Index>(v));
    }
    return list;
}

void validate_mr(Eigen::Index mr) {
    if (mr < 2) throw UsageError("--mr must be at least 2 (got mr=" + std::to_string(mr) + ")");
}

void validate_ladder(const std::vector<Eigen::Index>& list) {
    if (list.size() < 2) throw UsageError("--mr-list needs at least two levels");
    for (const auto mr : list) validate_mr(mr);
    for (std::size_t i = 1; i < list.size(); ++i) {
        const auto ratio = list[i] / list[0];
        if (list[i] <= list[i - 1] || list[i] % list[0] != 0 || (ratio & (ratio - 1)) != 0)
            throw UsageError("--mr-list must be strictly increasing powers-of-two multiples of its first entry");
    }
}

LevelOptions level_options(const RunConfig& c) {
    LevelOptions opts;
    if (c.dt == "h2") {
        opts.dt_rule = DtRule::h_squared;
    } else {
        opts.dt_rule = DtRule::fixed;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(c.dt, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != c.dt.size() || !(v > 0) || !std::isfinite(v))
            throw UsageError("--dt must be a positive number or 'h2' (got '" + c.dt + "')");
        opts.dt = v;
    }
    if (c.final_time && !(*c.final_time > 0)) throw UsageError("--T must be positive");
    opts.final_time = c.final_time;
    if (!(c.tol > 0)) throw UsageError("--tol must be positive");
    if (c.max_iter < 1) throw UsageError("--max-iter must be at least 1");
    opts.solver.scalar.tol = c.tol;
    opts.solver.scalar.max_iter = c.max_iter;
    return opts;
}

Benchmark benchmark_for(const RunConfig& c) {
    const auto id = parse_benchmark_id(c.problem);
    if (!id) throw UsageError("--problem: unknown problem '" + c.problem + "'");
    return make_benchmark(*id);
}

/// Writes to --out when given, otherwise to `fallback`.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path.empty()) return;
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_) throw UsageError("--out: cannot open '" + path + "' for writing");
        stream_ = &file_;
    }
    std::ostream& operator*() { return *stream_; }
    bool to_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

const char* side_name(bool minus) { return minus ? "minus" : "plus"; }

std::string report_line(const InterfaceReport<Real>& r) {
    std::ostringstream os;
    os << "s=" << format_number(r.s) << " iterations=" << r.iterations << " residual=" << format_number(r.residual)
       << " method=" << to_string(r.method);
    return os.str();
}

void write_solution(std::ostream& os, const BrokenField<Real>& u_h, const Benchmark* bench, Real t) {
    os << "x,side,u_h" << (bench ? ",u_exact,abs_error" : "") << '\n';
    for (const auto& p : sampling_grid(u_h.mesh())) {
        if (p.node < 0) continue;
        const Real v = sample(u_h, p);
        os << format_number(p.x) << ',' << side_name(p.minus_side) << ',' << format_number(v);
        if (bench) {
            const Real e = bench->exact(p.x, t, p.minus_side);
            os << ',' << format_number(e) << ',' << format_number(std::abs(v - e));
        }
        os << '\n';
    }
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.mr_list.size() > 0) throw UsageError("--mr-list is only valid for converge");
    validate_mr(c.mr);
    if (c.custom) {
        if (c.problem != "custom") throw UsageError("--problem must be 'custom' when the config defines a custom problem");
        const auto opts = level_options(c);
        const auto problem = c.custom->to_problem();
        auto mesh = std::make_shared<const Mesh1D<Real>>(build_fitted(problem.x_left, problem.x_right, problem.alpha, c.mr));
        const auto result = solve_elliptic(problem, mesh, opts.solver);
        Sink sink(c.out, out);
        write_solution(*sink, result.u_h, nullptr, 0);
        (sink.to_file() ? out : err) << report_line(result.interface) << '\n';
        return ok;
    }
    if (c.problem == "custom") throw UsageError("--problem custom requires a 'custom' block in --config");
    const auto bench = benchmark_for(c);
    const auto run = run_level(bench, c.mr, level_options(c));
    Sink sink(c.out, out);
    write_solution(*sink, run.result.u_h, &bench, run.t);
    auto& report = sink.to_file() ? out : err;
    report << report_line(run.result.interface);
    if (bench.is_parabolic()) report << " t=" << format_number(run.t);
    report << '\n';
    return ok;
}

double ladder_order(const ErrorRecord& a, const ErrorRecord& b, double ea, double eb) {
    if (ea == 0 || eb == 0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(ea / eb) / std::log(a.h / b.h);
}

std::vector<Eigen::Index> default_ladder(const Benchmark& bench) {
    if (bench.is_parabolic()) return {16, 32, 64, 128, 256};
    return {16, 32, 64, 128, 256, 512};
}

int cmd_converge(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.custom || c.problem == "custom") throw UsageError("--problem: converge needs a benchmark with an exact solution");
    const auto bench = benchmark_for(c);
    const auto ladder = c.mr_list.empty() ? default_ladder(bench) : c.mr_list;
    validate_ladder(ladder);
    const auto opts = level_options(c);

    std::vector<std::future<LevelRun>> pending;
    for (const auto mr : ladder)
        pending.push_back(std::async(std::launch::async, [&bench, mr, &opts] { return run_level(bench, mr, opts); }));

    std::vector<ErrorRecord> records;
    std::string failure;
    for (auto& f : pending) {
        try {
            auto rec = f.get().record;
            if (failure.empty()) records.push_back(rec);
        } catch (const std::exception& e) {
            if (failure.empty()) failure = "level mr=" + std::to_string(ladder[records.size()]) + ": " + e.what();
        }
    }

    Sink sink(c.out, out);
    auto& os = *sink;
    os << "mr,h,dt,jump_err,left_trace_err,right_trace_err,linf_err\n";
    for (const auto& r : records)
        os << r.mr << ',' << format_number(r.h) << ',' << (r.dt ? format_number(*r.dt) : "") << ','
           << format_number(r.jump_error) << ',' << format_number(r.left_trace_error) << ','
           << format_number(r.right_trace_error) << ',' << format_number(r.linf_error) << '\n';
    os << '\n' << "mr_from,mr_to,jump_order,left_trace_order,right_trace_order,linf_order\n";
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const auto& a = records[i];
        const auto& b = records[i + 1];
        os << a.mr << ',' << b.mr << ',' << format_number(ladder_order(a, b, a.jump_error, b.jump_error)) << ','
           << format_number(ladder_order(a, b, a.left_trace_error, b.left_trace_error)) << ','
           << format_number(ladder_order(a, b, a.right_trace_error, b.right_trace_error)) << ','
           << format_number(ladder_order(a, b, a.linf_error, b.linf_error)) << '\n';
    }
    os.flush();
    if (!failure.empty()) {
        err << "error: " << failure << '\n';
        return numerical_failure;
    }
    return ok;
}

int cmd_verify_mode(const RunConfig& c, std::ostream& out) {
    if (c.custom || c.problem == "custom") throw UsageError("--problem: verify-mode needs a benchmark with an exact solution");
    validate_mr(c.mr);
    const auto bench = benchmark_for(c);
    const auto run = run_level(bench, c.mr, level_options(c));
    const auto samples = error_mode_samples(run.result, bench, run.t);

    Real worst = 0;
    Real scale = 1;
    for (const auto& p : sampling_grid(run.result.u_h.mesh())) scale = std::max(scale, std::abs(sample(run.result.u_h, p)));

    Sink sink(c.out, out);
    auto& os = *sink;
    os << "x,side,lhs,rhs,diff\n";
    for (const auto& m : samples) {
        const Real d = m.lhs - m.rhs;
        worst = std::max(worst, std::abs(d));
        os << format_number(m.x) << ',' << side_name(m.minus_side) << ',' << format_number(m.lhs) << ','
           << format_number(m.rhs) << ',' << format_number(d) << '\n';
    }
    os.flush();
    out << "max_abs_diff=" << format_number(worst) << " scale=" << format_number(scale)
        << " s=" << format_number(run.result.s) << " s_exact=" << format_number(bench.exact_jump(run.t)) << '\n';
    return ok;
}

}  // namespace

EllipticProblem CustomProblem::to_problem() const {
    EllipticProblem p;
    p.x_left = x_left;
    p.x_right = x_right;
    p.alpha = alpha;
    p.beta = CoefficientPair<double>(beta_minus, beta_plus);
    p.xi = xi;
    p.eta = eta;
    p.law = law;
    if (forcing == "zero") {
        p.f = [](double) { return 0.0; };
    } else if (forcing == "constant") {
        p.f = [v = value](double) { return v; };
    } else {
        p.f = [a = amplitude, k = frequency](double x) { return a * std::sin(k * std::numbers::pi * x); };
    }
    return p;
}

JumpLaw<double> parse_law(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw UsageError("config: law must be an object with a 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    auto required = [&](const char* key) {
        if (!j.contains(key)) throw UsageError("config: " + kind + " law needs '" + key + "'");
        return number_at(j, key, 0);
    };
    if (kind == "constant") return JumpLaw<double>::constant(required("mu"));
    if (kind == "bilinear") return JumpLaw<double>::bilinear(required("lambda"));
    if (kind == "polynomial") {
        if (!j.contains("terms") || !j.at("terms").is_array()) throw UsageError("config: polynomial law needs 'terms'");
        std::vector<typename JumpLaw<double>::Term> terms;
        for (const auto& t : j.at("terms")) {
            if (!t.is_object() || !t.contains("i") || !t.contains("j") || !t.contains("c") || !t.at("i").is_number_integer() ||
                !t.at("j").is_number_integer() || !t.at("c").is_number())
                throw UsageError("config: polynomial terms need integer 'i', 'j' and numeric 'c'");
            terms.push_back({t.at("i").get<int>(), t.at("j").get<int>(), t.at("c").get<double>()});
        }
        try {
            return JumpLaw<double>::polynomial(std::move(terms));
        } catch (const Error& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
    }
    throw UsageError("config: unknown law kind '" + kind + "'");
}

CustomProblem parse_custom(const json& j) {
    if (!j.is_object()) throw UsageError("config: 'custom' must be an object");
    CustomProblem p;
    std::tie(p.x_left, p.x_right) = pair_at(j, "domain", {p.x_left, p.x_right});
    p.alpha = number_at(j, "alpha", 0.5 * (p.x_left + p.x_right));
    std::tie(p.beta_minus, p.beta_plus) = pair_at(j, "beta", {p.beta_minus, p.beta_plus});
    std::tie(p.xi, p.eta) = pair_at(j, "bc", {p.xi, p.eta});
    if (!j.contains("law")) throw UsageError("config: custom problem needs a 'law'");
    p.law = parse_law(j.at("law"));
    if (j.contains("forcing")) {
        const auto& f = j.at("forcing");
        if (!f.is_object() || !f.contains("kind") || !f.at("kind").is_string())
            throw UsageError("config: forcing must be an object with a 'kind'");
        p.forcing = f.at("kind").get<std::string>();
        if (p.forcing != "zero" && p.forcing != "constant" && p.forcing != "sine")
            throw UsageError("config: unknown forcing kind '" + p.forcing + "'");
        p.value = number_at(f, "value", 0);
        p.amplitude = number_at(f, "amplitude", 1);
        p.frequency = number_at(f, "frequency", 1);
    }
    if (!(p.x_left < p.alpha && p.alpha < p.x_right)) throw UsageError("config: alpha must lie inside the domain");
    if (!(p.beta_minus > 0 && p.beta_plus > 0)) throw UsageError("config: beta must be positive");
    return p;
}

void apply_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw UsageError("--config: top level must be an object");
    for (const auto& [key, v] : j.items()) {
        if (key == "problem") {
            if (!v.is_string()) throw UsageError("config: 'problem' must be a string");
            c.problem = v.get<std::string>();
        } else if (key == "custom") {
            c.custom = parse_custom(v);
            c.problem = "custom";
        } else if (key == "mr") {
            if (!v.is_number_integer()) throw UsageError("config: 'mr' must be an integer");
            c.mr = v.get<Eigen::Index>();
        } else if (key == "mr_list" || key == "mr-list") {
            if (!v.is_array()) throw UsageError("config: 'mr_list' must be an array");
            c.mr_list.clear();
            for (const auto& m : v) {
                if (!m.is_number_integer()) throw UsageError("config: 'mr_list' entries must be integers");
                c.mr_list.push_back(m.get<Eigen::Index>());
            }
        } else if (key == "dt") {
            if (v.is_string()) c.dt = v.get<std::string>();
            else if (v.is_number()) c.dt = format_number(v.get<double>());
            else throw UsageError("config: 'dt' must be a number or \"h2\"");
        } else if (key == "T") {
            if (!v.is_number()) throw UsageError("config: 'T' must be a number");
            c.final_time = v.get<double>();
        } else if (key == "tol") {
            if (!v.is_number()) throw UsageError("config: 'tol' must be a number");
            c.tol = v.get<double>();
        } else if (key == "max_iter" || key == "max-iter") {
            if (!v.is_number_integer()) throw UsageError("config: 'max_iter' must be an integer");
            c.max_iter = v.get<int>();
        } else if (key == "out") {
            if (!v.is_string()) throw UsageError("config: 'out' must be a string");
            c.out = v.get<std::string>();
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interface problem solver and verification tool", "ifr-solve"};
    app.require_subcommand(1);

    struct Flags {
        std::string problem, mr_list, dt, out, config;
        long long mr = 0;
        double T = 0, tol = 0;
        int max_iter = 0;
    } flags;
    std::map<std::string, CLI::Option*> given;

    auto add_common = [&](CLI::App* sub, bool ladder) {
        given[sub->get_name() + "problem"] = sub->add_option("--problem", flags.problem,
            "elliptic-prescribed | parabolic-prescribed | parabolic-nonlinear | custom");
        if (ladder)
            given[sub->get_name() + "mr-list"] = sub->add_option("--mr-list", flags.mr_list, "Element counts, e.g. 16,32,64");
        else
            given[sub->get_name() + "mr"] = sub->add_option("--mr", flags.mr, "Number of elements");
        given[sub->get_name() + "dt"] = sub->add_option("--dt", flags.dt, "Time step, or h2 for dt = h^2");
        given[sub->get_name() + "T"] = sub->add_option("--T", flags.T, "Final time override");
        given[sub->get_name() + "tol"] = sub->add_option("--tol", flags.tol, "Scalar solver tolerance");
        given[sub->get_name() + "max-iter"] = sub->add_option("--max-iter", flags.max_iter, "Scalar solver iteration cap");
        given[sub->get_name() + "out"] = sub->add_option("--out", flags.out, "Output CSV path (default: stdout)");
        sub->add_option("--config", flags.config, "JSON file with the same keys; flags override it");
    };
    auto* solve = app.add_subcommand("solve", "Solve one problem and write the solution CSV");
    auto* conv = app.add_subcommand("converge", "Run a refinement ladder and write the error table");
    auto* mode = app.add_subcommand("verify-mode", "Check the error splitting along the unit-jump mode");
    add_common(solve, false);
    add_common(conv, true);
    add_common(mode, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }

    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    auto set = [&](const std::string& key) { return given.count(name + key) && given[name + key]->count() > 0; };

    RunConfig c;
    c.command = name;
    if (name == "verify-mode") c.mr = 256;
    try {
        if (!flags.config.empty()) {
            std::ifstream in(flags.config);
            if (!in) throw UsageError("--config: cannot read '" + flags.config + "'");
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw UsageError("--config: " + std::string(e.what()));
            }
            apply_json(c, j);
        }
        if (set("problem")) {
            c.problem = flags.problem;
            if (c.problem != "custom") c.custom.reset();
        }
        if (set("mr")) c.mr = static_cast<Eigen::Index>(flags.mr);
        if (set("mr-list")) c.mr_list = parse_mr_list(flags.mr_list);
        if (set("dt")) c.dt = flags.dt;
        if (set("T")) c.final_time = flags.T;
        if (set("tol")) c.tol = flags.tol;
        if (set("max-iter")) c.max_iter = flags.max_iter;
        if (set("out")) c.out = flags.out;

        if (name == "solve") return cmd_solve(c, out, err);
        if (name == "converge") return cmd_converge(c, out, err);
        return cmd_verify_mode(c, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const InvalidResolutionError& e) {
        err << "error: --mr: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return numerical_failure;
    }
}

}  // namespace ifr::cli
