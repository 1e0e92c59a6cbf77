// Command-line experiment runner: executes iteration runs, scheme
// comparisons, mapping-class and modular-axiom checks, and norm evaluations
// from a JSON config, emitting traces and reports as aligned text or CSV.
//
// Exit codes: 0 success / tolerance met, 1 error, 2 iteration cap reached,
// 3 check found violations.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modfix/analysis.hpp"
#include "modfix/config.hpp"
#include "modfix/iterate.hpp"
#include "modfix/trace_io.hpp"

namespace {

using namespace modfix;

struct Overrides {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> tol;
    std::optional<double> start;
    std::optional<std::uint64_t> max_iter;
    std::optional<std::string> scheme;
    std::optional<std::string> format;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--alpha", o.alpha, "override the alpha step size (constant)");
    cmd->add_option("--beta", o.beta, "override the beta step size (constant)");
    cmd->add_option("--tol", o.tol, "override the stop tolerance");
    cmd->add_option("--max-iter", o.max_iter, "override the iteration cap");
    cmd->add_option("--scheme", o.scheme, "override the scheme (khan|picard|mann|ishikawa)");
    cmd->add_option("--seed", o.seed, "override the sampling seed");
    cmd->add_option("--format", o.format, "output format (table|csv)");
    cmd->add_option("--output", o.output, "output path ('-' for stdout)");
    cmd->add_option("--start", o.start, "override the starting point (broadcast scalar)");
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
    if (o.alpha) {
        cfg.scheme.alpha = StepSequence::constant(*o.alpha);
        for (SchemeEntry& entry : cfg.schemes) {
            entry.alpha = StepSequence::constant(*o.alpha);
        }
    }
    if (o.beta) {
        cfg.scheme.beta = StepSequence::constant(*o.beta);
        for (SchemeEntry& entry : cfg.schemes) {
            entry.beta = StepSequence::constant(*o.beta);
        }
    }
    if (o.scheme) {
        cfg.scheme.kind = scheme_from_string(*o.scheme);
    }
    if (o.tol) {
        if (!cfg.stop) {
            throw ParameterError("--tol given but the config has no stop rule");
        }
        cfg.stop->tol = *o.tol;
        if (!(cfg.stop->tol > 0.0)) {
            throw ParameterError("stop.tol: must be > 0");
        }
    }
    if (o.max_iter) {
        if (!cfg.stop) {
            throw ParameterError("--max-iter given but the config has no stop rule");
        }
        if (*o.max_iter < 1) {
            throw ParameterError("stop.max_iter: must be >= 1");
        }
        cfg.stop->max_iter = *o.max_iter;
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.format) {
        cfg.output.format = output_format_from_string(*o.format);
    }
    if (o.output) {
        cfg.output.path = *o.output;
    }
    if (o.start) {
        cfg.start = FnVec::constant(cfg.grid.size(), *o.start);
    }
}

bool use_color(const ExperimentConfig& cfg) {
    return cfg.output.format == OutputFormat::table && cfg.output.path == "-" &&
           isatty(STDOUT_FILENO) && std::getenv("NO_COLOR") == nullptr;
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParameterError("cannot write output file '" + path + "'");
    }
    out << text;
}

// The convergence guarantees for these schemes assume a UUC1 modular with
// the doubling growth condition; warn when the config does not declare them.
void warn_undeclared(const ModularFn& rho) {
    if (!rho.declared_uuc1()) {
        std::cerr << "warning: modular does not declare UUC1; convergence guarantees may not apply\n";
    }
    if (!rho.declared_delta2()) {
        std::cerr << "warning: modular does not declare the doubling growth condition\n";
    }
}

const char* require_msg(const char* field) { return field; }

template <typename T>
const T& require(const std::optional<T>& field, const char* name) {
    if (!field) {
        throw ParameterError(std::string(require_msg(name)) + ": required for this command");
    }
    return *field;
}

SchemeSpec build_scheme(const SchemeEntry& entry) {
    SchemeSpec spec;
    spec.kind = entry.kind;
    spec.beta = entry.beta;
    if (spec.kind == SchemeKind::ishikawa && !spec.beta) {
        throw ParameterError("scheme: ishikawa requires a beta step sequence");
    }
    return spec;
}

void print_stop_summary(const IterationTrace& trace, std::size_t max_iter) {
    if (trace.stop_reason == StopReason::tolerance_met) {
        std::cerr << "stopped: tolerance met after " << trace.iterations() << " iterations\n";
    } else {
        std::cerr << "stopped: iteration cap (" << max_iter << ") reached\n";
    }
}

int cmd_run(ExperimentConfig& cfg) {
    const MappingSpec& mapping = require(cfg.mapping, "mapping");
    const FnVec& start = require(cfg.start, "start");
    const StopSpec& stop_spec = require(cfg.stop, "stop");
    warn_undeclared(cfg.modular);

    const StopRule stop = stop_spec.build();
    const SchemeSpec scheme = build_scheme(cfg.scheme);
    try {
        const IterationTrace trace =
            run(scheme, mapping, start, cfg.scheme.alpha, stop, cfg.modular, cfg.grid);
        write_output(cfg.output.path, render_trace(trace, cfg.output.format, use_color(cfg)));
        print_stop_summary(trace, stop.max_iter());
        return trace.stop_reason == StopReason::tolerance_met ? 0 : 2;
    } catch (const RunError& e) {
        // keep whatever was produced before the failure
        write_output(cfg.output.path,
                     render_trace(e.partial_trace(), cfg.output.format, use_color(cfg)));
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_compare(ExperimentConfig& cfg) {
    const MappingSpec& mapping = require(cfg.mapping, "mapping");
    const FnVec& start = require(cfg.start, "start");
    const StopSpec& stop_spec = require(cfg.stop, "stop");
    warn_undeclared(cfg.modular);

    std::vector<SchemeEntry> entries = cfg.schemes;
    if (entries.empty()) {
        entries.push_back(cfg.scheme);
    }

    std::vector<CompareSpec> specs;
    if (cfg.alpha_sweep.empty()) {
        for (const SchemeEntry& entry : entries) {
            specs.push_back({entry.name.empty() ? std::string(to_string(entry.kind)) : entry.name,
                             build_scheme(entry), entry.alpha});
        }
    } else {
        for (const SchemeEntry& entry : entries) {
            const std::string base =
                entry.name.empty() ? std::string(to_string(entry.kind)) : entry.name;
            for (double a : cfg.alpha_sweep) {
                specs.push_back({base + " a=" + format_shortest(a), build_scheme(entry),
                                 StepSequence::constant(a)});
            }
        }
    }

    const std::vector<CompareRow> rows =
        compare_schemes(specs, mapping, start, stop_spec.build(), cfg.modular, cfg.grid);
    write_output(cfg.output.path, render_compare(rows, cfg.output.format, use_color(cfg)));
    return 0;
}

int cmd_check(ExperimentConfig& cfg) {
    const CheckSpec& check = require(cfg.check, "check");
    const DomainBox& box = require(cfg.domain, "domain");

    if (check.kind == "convexity" || check.kind == "monotone") {
        const ModularReport report =
            check.kind == "convexity"
                ? check_convexity(cfg.modular, cfg.grid, check.count, cfg.seed, box)
                : check_monotone(cfg.modular, cfg.grid, check.count, cfg.seed, box);
        write_output(cfg.output.path,
                     render_modular_report(report, cfg.output.format, use_color(cfg)));
        return report.passed() ? 0 : 3;
    }
    if (check.kind == "delta2") {
        const double ratio = delta2_ratio_probe(cfg.modular, cfg.grid, check.count, cfg.seed, box);
        if (cfg.output.format == OutputFormat::csv) {
            write_output(cfg.output.path, "delta2_ratio\n" + format_shortest(ratio) + "\n");
        } else {
            write_output(cfg.output.path, "delta2_ratio  " + format_shortest(ratio) + "\n");
        }
        return 0;
    }

    const MappingSpec& mapping = require(cfg.mapping, "mapping");
    ClassReport report;
    if (check.kind == "firm") {
        if (!check.lambda) {
            throw ParameterError("check.lambda: required for the firm class");
        }
        report = check_firm_nonexpansive(cfg.modular, cfg.grid, mapping, *check.lambda, box,
                                         check.count, cfg.seed);
    } else if (check.kind == "nonexpansive") {
        report = check_rho_nonexpansive(cfg.modular, cfg.grid, mapping, box, check.count, cfg.seed);
    } else if (check.kind == "condition-i") {
        if (!check.ell) {
            throw ParameterError("check.ell: required for condition-i");
        }
        if (check.fixed_points.empty()) {
            throw ParameterError("check.fixed_points: required for condition-i");
        }
        const ExprAst ell = parse_expr(*check.ell, "r");
        report = check_condition_I(cfg.modular, cfg.grid, mapping, check.fixed_points, ell, box,
                                   check.count, cfg.seed, check.check_ell_monotone);
    } else {
        throw ParameterError("check.class: expected firm, nonexpansive, condition-i, convexity, "
                             "monotone or delta2");
    }
    write_output(cfg.output.path, render_class_report(report, cfg.output.format, use_color(cfg)));
    return report.passed() ? 0 : 3;
}

int cmd_norm(ExperimentConfig& cfg) {
    const FnVec& f = require(cfg.norm_input, "f");
    const double rho_value = eval_modular(cfg.modular, cfg.grid, f);
    const double norm_value = luxemburg_norm(cfg.modular, cfg.grid, f);
    std::string text;
    if (cfg.output.format == OutputFormat::csv) {
        text = "rho,norm\n" + format_shortest(rho_value) + "," + format_shortest(norm_value) + "\n";
    } else {
        text = "rho   " + format_shortest(rho_value) + "\nnorm  " + format_shortest(norm_value) +
               "\n";
    }
    write_output(cfg.output.path, text);
    return 0;
}

// Built-in worked example: Tf = (2f+1)/3 on the scalar space with the
// absolute modular, f1 = 4, khan scheme, stop on |f_{n+1} - 1| < tol.
ExperimentConfig paper_table_config() {
    ExperimentConfig cfg;
    cfg.grid = MeasureGrid::scalar();
    cfg.modular = ModularFn::absolute();
    cfg.mapping = MappingSpec::affine(2.0 / 3.0, 1.0 / 3.0);
    cfg.scheme.kind = SchemeKind::khan;
    cfg.scheme.alpha = StepSequence::constant(0.5);
    StopSpec stop;
    stop.kind = StopRule::Kind::residual_to_fixed_point;
    stop.w = FnVec::scalar(1.0);
    stop.tol = 1e-5;
    stop.max_iter = 10000;
    cfg.stop = stop;
    cfg.start = FnVec::scalar(4.0);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-point iteration toolkit for modular function spaces"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    CLI::App* sub_run = app.add_subcommand("run", "run one iteration scheme and emit the trace");
    sub_run->add_option("config", config_path, "JSON config file")->required();
    add_override_flags(sub_run, overrides);

    CLI::App* sub_compare =
        app.add_subcommand("compare", "run several schemes under one stop rule");
    sub_compare->add_option("config", config_path, "JSON config file")->required();
    add_override_flags(sub_compare, overrides);

    CLI::App* sub_check =
        app.add_subcommand("check", "sampled mapping-class or modular-axiom check");
    sub_check->add_option("config", config_path, "JSON config file")->required();
    add_override_flags(sub_check, overrides);

    CLI::App* sub_norm = app.add_subcommand("norm", "evaluate rho(f) and the Luxemburg norm");
    sub_norm->add_option("config", config_path, "JSON config file")->required();
    add_override_flags(sub_norm, overrides);

    CLI::App* sub_table = app.add_subcommand(
        "paper-table", "print the built-in worked example (Tf=(2f+1)/3, f1=4, alpha=0.5)");
    add_override_flags(sub_table, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        ExperimentConfig cfg =
            app.got_subcommand(sub_table) ? paper_table_config() : load_config_file(config_path);
        apply_overrides(cfg, overrides);
        if (app.got_subcommand(sub_run) || app.got_subcommand(sub_table)) {
            return cmd_run(cfg);
        }
        if (app.got_subcommand(sub_compare)) {
            return cmd_compare(cfg);
        }
        if (app.got_subcommand(sub_check)) {
            return cmd_check(cfg);
        }
        if (app.got_subcommand(sub_norm)) {
            return cmd_norm(cfg);
        }
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const modfix::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
