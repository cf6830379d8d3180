#pragma once

// Command-line front end. run_cli is the whole program minus process I/O,
// so tests drive it with string streams.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "memcost/config.hpp"
#include "memcost/cost.hpp"
#include "memcost/error.hpp"
#include "memcost/retention_exact.hpp"
#include "memcost/retention_mc.hpp"
#include "memcost/sweep.hpp"
#include "memcost/table_io.hpp"
#include "memcost/threshold.hpp"

namespace memcost::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kDegenerate = 3, kNumeric = 4 };

// Ordered key/value output of the point commands.
using Record = std::vector<std::pair<std::string, std::string>>;

inline void print_record(const Record& rec, const std::string& format, std::ostream& out) {
    if (format.empty() || format == "text") {
        for (const auto& [k, v] : rec) out << k << '=' << v << '\n';
    } else if (format == "json") {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : rec) j[k] = v;
        out << j.dump(2) << '\n';
    } else if (format == "csv") {
        for (std::size_t i = 0; i < rec.size(); ++i) out << (i ? "," : "") << rec[i].first;
        out << '\n';
        for (std::size_t i = 0; i < rec.size(); ++i) out << (i ? "," : "") << rec[i].second;
        out << '\n';
    } else {
        throw ValidationError("--format " + format + " is not available for this command (text|json|csv)");
    }
}

inline void add_breakdown(Record& rec, const std::string& prefix, const CostBreakdown& b) {
    rec.emplace_back(prefix + "total", format_number(b.total));
    rec.emplace_back(prefix + "material", format_number(b.material));
    rec.emplace_back(prefix + "coupling", format_number(b.coupling));
    rec.emplace_back(prefix + "field", format_number(b.field));
    rec.emplace_back(prefix + "replenishment", format_number(b.replenishment));
    rec.emplace_back(prefix + "tau", format_number(b.tau_used));
}

inline void add_threshold(Record& rec, const ThresholdResult& r) {
    rec.emplace_back("c_r0", format_number(r.c_r0));
    rec.emplace_back("config_a", r.config_a);
    rec.emplace_back("config_b", r.config_b);
    rec.emplace_back("regime_above", r.regime_above);
    if (!r.note.empty()) rec.emplace_back("note", r.note);
}

// A comparison operand: a scenario id (S1..S6) or a topology name.
inline CostedConfig resolve_config(const std::string& descriptor, const Parameters& p) {
    if (descriptor.size() == 2 && (descriptor[0] == 'S' || descriptor[0] == 's')) {
        const Scenario s = parse_scenario(descriptor);
        return scenario_config(s, p.h, p.sf, p.beta);
    }
    Parameters q = p;
    q.topology = descriptor;
    return {descriptor, q.system(), p.rule};
}

// Writes `content` to `path`, or to `out` when path is empty.
inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file '" + path + "'");
    f << content;
}

inline std::string table_format(const Parameters& p, const std::string& fallback) {
    if (!p.format.empty()) return p.format;
    if (!p.out.empty()) {
        const std::string ext = std::filesystem::path(p.out).extension().string();
        if (ext == ".csv" || ext == ".json" || ext == ".dat") return ext.substr(1);
    }
    return fallback;
}

inline void write_table(const SweepTable& table, const Parameters& p, const std::string& fallback,
                        std::ostream& out) {
    const Format f = parse_format(table_format(p, fallback));
    if (f == Format::Dat && table.multi_curve) {
        if (p.out.empty()) throw ValidationError("dat output of a multi-curve table needs --out");
        const std::filesystem::path base(p.out);
        for (const auto& file : emit_dat(table)) {
            std::filesystem::path path = base.parent_path() /
                                         (base.stem().string() + file.suffix + base.extension().string());
            write_output(path.string(), file.content, out);
        }
        return;
    }
    write_output(p.out, emit(table, f), out);
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"memcost: retention times and cost thresholds of small dipole memories", "memcost"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1, 1);

    // Global flags are collected as text and parsed once, after config
    // files are merged, so flags override file values uniformly.
    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> flag_options;
    const std::vector<std::pair<std::string, std::string>> flags = {
        {"beta", "inverse temperature"},
        {"mu", "permeability"},
        {"h", "external field H"},
        {"sf", "coupling strength s_f"},
        {"cm", "material cost C_M"},
        {"cr", "replenishment cost C(R) per dipole"},
        {"k", "coupling cost prefactor"},
        {"m", "coupling cost exponent on s_f"},
        {"n", "coupling cost exponent on C_M"},
        {"seed", "Monte Carlo seed"},
        {"trials", "Monte Carlo trials"},
        {"workers", "Monte Carlo worker threads"},
        {"max-steps", "step cap per Monte Carlo trial"},
        {"horizon", "ledger horizon in steps"},
        {"format", "output format: text|json|csv for point results, csv|json|dat for tables"},
        {"out", "output file (default: stdout)"},
        {"topology", "isolated|uncoupled3|line3|triangle3|custom"},
        {"dipoles", "dipole count of a custom topology"},
        {"edges", "custom edges, e.g. 0-1:0.5,1-2:0.5"},
        {"pattern", "stored bit pattern, e.g. 101"},
        {"rule", "absorption rule: majority|all|any"},
        {"scenario", "scenario id S1..S6"},
    };
    for (const auto& [name, help] : flags)
        flag_options[name] = app.add_option("--" + name, flag_values[name], help);
    std::string config_path;
    app.add_option("--config", config_path, "key=value file; flags override its values");

    std::string retention_method = "exact";
    auto* retention = app.add_subcommand("retention", "retention time of one system");
    retention->add_option("method", retention_method, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));

    auto* ledger = app.add_subcommand("ledger", "simulated replenishment cost rate over a horizon");

    std::string cost_mode = "scenario";
    auto* cost = app.add_subcommand("cost", "cost breakdown of a scenario or topology");
    cost->add_option("mode", cost_mode, "scenario|topology")->check(CLI::IsMember({"scenario", "topology"}));

    std::string compare_a, compare_b;
    auto* compare = app.add_subcommand("compare", "compare total cost rates of two configurations");
    compare->add_option("a", compare_a, "S1..S6 or topology name")->required();
    compare->add_option("b", compare_b, "S1..S6 or topology name")->required();

    std::string threshold_kind;
    std::string threshold_a, threshold_b;
    auto* threshold = app.add_subcommand("threshold", "critical replenishment cost C(R0)");
    threshold->add_option("kind", threshold_kind, "single|single-exact|three|line-vs-triangle|generic")
        ->required()
        ->check(CLI::IsMember({"single", "single-exact", "three", "line-vs-triangle", "generic"}));
    threshold->add_option("a", threshold_a, "generic: first configuration");
    threshold->add_option("b", threshold_b, "generic: second configuration");

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "run a sweep described by a config file");
    sweep->add_option("config", sweep_config, "sweep config file")->required();

    int figure = 0;
    auto* figures = app.add_subcommand("figures", "data behind the three cost-threshold figures");
    figures->add_option("figure", figure, "1, 2 or 3")->required()->check(CLI::Range(1, 3));

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<const char*> argv{"memcost"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "memcost: error: " << e.what() << '\n';
        return kValidation;
    }

    try {
        KeyValues kv;
        if (!config_path.empty()) kv = load_key_values(config_path);
        if (sweep->parsed()) {
            for (auto& [k, v] : load_key_values(sweep_config)) kv[k] = v;
        }
        for (const auto& [name, opt] : flag_options)
            if (opt->count() > 0) kv[name] = flag_values[name];

        Parameters p;
        memcost::apply(p, kv);
        Record rec;

        if (retention->parsed()) {
            const SystemSpec spec = p.system();
            if (retention_method == "exact") {
                const RetentionResult r = retention_time_exact(spec, p.rule);
                rec = {{"tau", format_number(r.tau)}, {"method", to_string(r.method)}};
            } else {
                const McEstimate est = estimate_retention(spec, p.rule, p.mc);
                if (est.trials_truncated > 0)
                    err << "memcost: warning: " << est.trials_truncated
                        << " trials hit the step cap and were excluded\n";
                rec = {{"tau", format_number(est.mean)},
                       {"method", to_string(Method::MonteCarlo)},
                       {"stderr", format_number(est.standard_error)},
                       {"trials_used", std::to_string(est.trials_used)},
                       {"trials_truncated", std::to_string(est.trials_truncated)},
                       {"seed", std::to_string(p.mc.seed)}};
            }
            rec.emplace_back("topology", p.topology);
            rec.emplace_back("rule", to_string(p.rule));
        } else if (ledger->parsed()) {
            const SystemSpec spec = p.system();
            const LedgerResult r = simulate_energy_ledger(spec, p.rule, p.mc, p.cost.c_r, p.horizon);
            if (r.short_horizon)
                err << "memcost: warning: horizon covers only " << r.refreshes << " refresh cycles\n";
            rec = {{"rate", format_number(r.rate)},
                   {"stderr", format_number(r.standard_error)},
                   {"refreshes", std::to_string(r.refreshes)},
                   {"horizon", std::to_string(r.horizon)},
                   {"seed", std::to_string(p.mc.seed)}};
            if (spec.size() <= kExactDipoleCap) {
                const double tau = retention_time_exact(spec, p.rule).tau;
                rec.emplace_back("expected_rate", format_number(effective_replenishment(p.cost.c_r, tau, spec.size())));
            }
        } else if (cost->parsed()) {
            if (cost_mode == "scenario") {
                const Scenario s = parse_scenario(p.scenario);
                rec.emplace_back("scenario", std::string(to_string(s)));
                add_breakdown(rec, "", scenario_cost(s, p.cost, p.h, p.sf, p.beta));
            } else {
                rec.emplace_back("topology", p.topology);
                add_breakdown(rec, "", generalized_cost(p.system(), p.cost, p.rule));
            }
        } else if (compare->parsed()) {
            const CostedConfig a = resolve_config(compare_a, p);
            const CostedConfig b = resolve_config(compare_b, p);
            const CostBreakdown ca = generalized_cost(a.spec, p.cost, a.rule);
            const CostBreakdown cb = generalized_cost(b.spec, p.cost, b.rule);
            const double diff = ca.total - cb.total;
            add_breakdown(rec, "a_", ca);
            add_breakdown(rec, "b_", cb);
            rec.emplace_back("difference", format_number(diff));
            rec.emplace_back("cheaper", diff < 0.0 ? a.label : diff > 0.0 ? b.label : "tie");
        } else if (threshold->parsed()) {
            ThresholdResult r;
            if (threshold_kind == "single") {
                r = critical_single(p.h, p.beta, p.cost.mu);
                add_threshold(rec, r);
                rec.emplace_back("c_r0_exact", format_number(critical_single_exact(p.h, p.beta, p.cost.mu).c_r0));
            } else if (threshold_kind == "single-exact") {
                add_threshold(rec, critical_single_exact(p.h, p.beta, p.cost.mu));
            } else if (threshold_kind == "three") {
                add_threshold(rec, critical_three_uncoupled(p.h, p.beta, p.cost.mu));
            } else if (threshold_kind == "line-vs-triangle") {
                add_threshold(rec, critical_line_vs_triangle(p.h, p.sf, p.beta, p.cost));
            } else {
                if (threshold_a.empty() || threshold_b.empty())
                    throw ValidationError("threshold generic needs two configurations");
                add_threshold(rec, generic_crossover(resolve_config(threshold_a, p),
                                                     resolve_config(threshold_b, p), p.cost));
            }
        } else if (sweep->parsed()) {
            write_table(run_sweep(sweep_from_key_values(kv)), p, "csv", out);
            return kOk;
        } else if (figures->parsed()) {
            SweepSpec s = figure_recipe(figure);
            memcost::apply(s.fixed, kv);
            write_table(run_sweep(s), p, "dat", out);
            return kOk;
        }

        std::ostringstream text;
        print_record(rec, p.format, text);
        write_output(p.out, text.str(), out);
        return kOk;
    } catch (const DegenerateThreshold& e) {
        err << "memcost: degenerate threshold: " << e.what() << '\n';
        return kDegenerate;
    } catch (const ValidationError& e) {
        err << "memcost: validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const DomainError& e) {
        err << "memcost: domain error: " << e.what() << '\n';
        return kValidation;
    } catch (const CapacityError& e) {
        err << "memcost: capacity error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "memcost: numeric failure: " << e.what() << '\n';
        return kNumeric;
    }
}

} // namespace memcost::cli
