// summatau: batch CLI over the summability library. Subcommands parse a
// sequence or function spec, run one method, and emit a JSON report (or a
// CSV curve). Exit codes: 0 = clean verdict of any kind (Inconclusive is
// data, not an error), 2 = parse/usage error, 3 = evaluation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "summatau/abel.hpp"
#include "summatau/cesaro.hpp"
#include "summatau/dsl.hpp"
#include "summatau/function_expr.hpp"
#include "summatau/io.hpp"
#include "summatau/oscillation.hpp"
#include "summatau/probes.hpp"
#include "summatau/reports.hpp"
#include "summatau/sequence.hpp"
#include "summatau/statistical.hpp"

namespace {

using namespace summatau;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitEval = 3;

struct CommonFlags {
    double eps_tail = ToleranceProfile{}.eps_tail;
    double eps_conv = ToleranceProfile{}.eps_conv;
    double eps_witness = ToleranceProfile{}.eps_witness;
    std::uint64_t n_max = ToleranceProfile{}.n_max;
    int grid_depth = ToleranceProfile{}.grid_depth;
    bool trust_heuristic = false;
    std::string output;
    std::string format = "json";
};

void add_common_flags(CLI::App* cmd, CommonFlags* f) {
    cmd->add_option("--eps-tail", f->eps_tail, "Truncation budget per Abel mean evaluation")
        ->capture_default_str();
    cmd->add_option("--eps-conv", f->eps_conv, "Grid stabilization threshold")
        ->capture_default_str();
    cmd->add_option("--eps-witness", f->eps_witness, "Margin for declaring limit mismatch")
        ->capture_default_str();
    cmd->add_option("--n-max", f->n_max, "Hard cap on terms per evaluation")
        ->capture_default_str();
    cmd->add_option("--grid-depth", f->grid_depth, "Number of Abel grid points")
        ->capture_default_str();
    cmd->add_flag("--trust-heuristic", f->trust_heuristic,
                  "Accept Converged verdicts backed by heuristic tail estimates");
    cmd->add_option("-o,--output", f->output, "Write the report to a file instead of stdout");
    cmd->add_option("--format", f->format, "Output format: json or csv (curve data is always csv)")
        ->check(CLI::IsMember({"json", "csv"}));
}

ToleranceProfile make_profile(const CommonFlags& f) {
    ToleranceProfile p;
    p.eps_tail = f.eps_tail;
    p.eps_conv = f.eps_conv;
    p.eps_witness = f.eps_witness;
    p.n_max = f.n_max;
    p.grid_depth = f.grid_depth;
    p.trust_heuristic = f.trust_heuristic;
    if (const char* cap = std::getenv("SUMMATAU_N_MAX")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(cap, &end, 10);
        if (end && *end == '\0' && v > 0)
            p.n_max = std::min<std::uint64_t>(p.n_max, v);
        else
            std::cerr << "warning: ignoring malformed SUMMATAU_N_MAX='" << cap << "'\n";
    }
    std::vector<std::string> warnings;
    p.validate(&warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return p;
}

void emit(const CommonFlags& f, const std::string& payload) {
    if (f.output.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(f.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + f.output + "'");
    out << payload;
}

std::vector<std::uint64_t> parse_theta(const std::string& text, std::uint64_t n_cap) {
    // Either powers(base) or a file of whitespace-separated integers.
    if (text.rfind("powers(", 0) == 0 && text.back() == ')') {
        const std::string arg = text.substr(7, text.size() - 8);
        char* end = nullptr;
        const unsigned long long base = std::strtoull(arg.c_str(), &end, 10);
        if (!end || *end != '\0' || base < 2)
            throw ParseError("theta powers(base) needs an integer base >= 2", 7);
        return lacunary_powers(base, n_cap);
    }
    std::ifstream in(text);
    if (!in) throw ParseError("theta: cannot open file '" + text + "'", 0);
    std::vector<std::uint64_t> k;
    long long v;
    while (in >> v) {
        if (v < 0) throw ParseError("theta: indices must be non-negative", 0);
        k.push_back(static_cast<std::uint64_t>(v));
    }
    if (k.empty()) throw ParseError("theta: file '" + text + "' holds no indices", 0);
    return k;
}

int cmd_limit(const std::string& spec_text, const std::string& method, const std::string& theta_text,
              std::optional<std::uint64_t> seed, const CommonFlags& flags) {
    ToleranceProfile profile = make_profile(flags);
    SequenceSpec spec = parse_spec(spec_text);
    if (seed) spec.seed = seed;
    Sequence seq = make_sequence(spec);

    Verdict v;
    bool eval_failed = false;
    if (method == "abel") {
        MeanCurve curve = mean_curve(seq, profile);
        for (const auto& pt : curve.points) eval_failed |= pt.tail == TailKind::Error;
        v = classify_mean_curve(curve, profile);
    } else if (method == "cesaro") {
        v = cesaro_limit(seq, profile);
    } else if (method == "st") {
        v = st_limit(seq, profile);
    } else if (method == "st-lacunary") {
        auto k_list = parse_theta(theta_text, profile.n_max);
        LacunarySequence theta = validate_lacunary(k_list);
        v = st_lacunary_limit(seq, theta, profile);
    } else {
        throw ParseError("unknown method '" + method + "'", 0);
    }
    emit(flags, verdict_json(v, method, render_spec(spec)));
    return eval_failed ? kExitEval : kExitOk;
}

int cmd_curve(const std::string& spec_text, std::optional<std::uint64_t> seed,
              const CommonFlags& flags) {
    ToleranceProfile profile = make_profile(flags);
    SequenceSpec spec = parse_spec(spec_text);
    if (seed) spec.seed = seed;
    MeanCurve curve = mean_curve(make_sequence(spec), profile);
    emit(flags, mean_curve_csv(curve));
    for (const auto& pt : curve.points)
        if (pt.tail == TailKind::Error) {
            std::cerr << "evaluation error at x=" << pt.x << ": " << pt.note << '\n';
            return kExitEval;
        }
    return kExitOk;
}

int cmd_probe(const std::string& fn_text, const std::string& battery_text,
              std::optional<double> point, const CommonFlags& flags) {
    ToleranceProfile profile = make_profile(flags);
    FunctionSpec f = parse_function(fn_text);
    if (point) {
        OrdinaryReport rep = probe_ordinary_continuity(f, *point, profile);
        emit(flags, ordinary_report_json(rep, f.render()));
        return kExitOk;
    }
    std::vector<SequenceSpec> battery;
    if (battery_text == "default") {
        battery = default_battery();
    } else {
        std::ifstream in(battery_text);
        if (!in) throw ParseError("battery: cannot open file '" + battery_text + "'", 0);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            battery.push_back(parse_spec(line));
        }
        if (battery.empty()) throw ParseError("battery file holds no specs", 0);
    }
    ProbeReport rep = probe_abel_continuity(f, battery, profile);
    emit(flags, probe_report_json(rep));
    return kExitOk;
}

int cmd_oscillation(const std::string& spec_text, std::optional<std::uint64_t> seed,
                    const CommonFlags& flags) {
    ToleranceProfile profile = make_profile(flags);
    SequenceSpec spec = parse_spec(spec_text);
    if (seed) spec.seed = seed;
    Sequence seq = make_sequence(spec);
    SoReport rep = is_slowly_oscillating(seq, profile);
    if (flags.format == "csv") {
        OscillationProfile prof = so_profile(seq, so_lambda_grid(), so_index_grid(profile));
        emit(flags, so_profile_csv(prof));
    } else {
        emit(flags, oscillation_report_json(rep, render_spec(spec)));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"summatau: summability methods and continuity probes for real sequences"};
    app.require_subcommand(1);

    std::string spec_text, fn_text;
    std::string method = "abel";
    std::string theta_text = "powers(2)";
    std::string battery_text = "default";
    std::optional<double> point;
    std::optional<std::uint64_t> seed;
    CommonFlags limit_flags, curve_flags, probe_flags, osc_flags;
    // Probes default to the dedicated probe profile unless overridden.
    probe_flags.eps_conv = summatau::probe_profile().eps_conv;
    probe_flags.n_max = summatau::probe_profile().n_max;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Seed override for random families");
    };

    CLI::App* limit = app.add_subcommand("limit", "Classify a sequence limit under one method");
    limit->add_option("spec", spec_text, "Sequence spec, e.g. \"alternating(c=1)\"")->required();
    limit->add_option("--method", method, "abel | cesaro | st | st-lacunary")
        ->check(CLI::IsMember({"abel", "cesaro", "st", "st-lacunary"}));
    limit->add_option("--theta", theta_text, "Lacunary windows: powers(base) or an index file");
    add_seed(limit);
    add_common_flags(limit, &limit_flags);

    CLI::App* curve = app.add_subcommand("curve", "Emit the Abel mean curve as CSV");
    curve->add_option("spec", spec_text, "Sequence spec")->required();
    add_seed(curve);
    add_common_flags(curve, &curve_flags);

    CLI::App* probe = app.add_subcommand("probe", "Probe a function for Abel continuity");
    probe->add_option("function", fn_text, "Function spec, e.g. \"t^2\" or \"1/(1+t^2)\"")->required();
    probe->add_option("--battery", battery_text, "default or a file of sequence specs");
    probe->add_option("--point", point, "Probe ordinary continuity at this point instead");
    add_common_flags(probe, &probe_flags);

    CLI::App* oscillation = app.add_subcommand("oscillation", "Slow-oscillation report");
    oscillation->add_option("spec", spec_text, "Sequence spec")->required();
    add_seed(oscillation);
    add_common_flags(oscillation, &osc_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitParse;
    }

    try {
        if (limit->parsed()) return cmd_limit(spec_text, method, theta_text, seed, limit_flags);
        if (curve->parsed()) return cmd_curve(spec_text, seed, curve_flags);
        if (probe->parsed()) return cmd_probe(fn_text, battery_text, point, probe_flags);
        if (oscillation->parsed()) return cmd_oscillation(spec_text, seed, osc_flags);
        std::cerr << "error: no subcommand\n";
        return kExitParse;
    } catch (const summatau::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const summatau::LacunaryError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const summatau::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << '\n';
        return kExitEval;
    } catch (const std::exception& e) {
        std::cerr << "evaluation error: " << e.what() << '\n';
        return kExitEval;
    }
}
