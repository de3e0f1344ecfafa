#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sosgap/batch.hpp"
#include "sosgap/gap.hpp"
#include "sosgap/generate.hpp"
#include "sosgap/io.hpp"
#include "sosgap/knapsack.hpp"

// Command-line surface.  Subcommands:
//   gen     write a seeded instance file
//   opt     exact 0/1 optimum of an instance file
//   lp      fractional relaxation value
//   sos     solve the degree-2t relaxation            (--degree t)
//   gap     relaxation vs optimum vs guaranteed bound (--degree t)
//   verify  structural lemma checks on solved moments (--degree t)
//   batch   seeded multi-instance experiment          (--degrees 2,3 --count N --seed S)
// Exit codes: 0 success/pass, 1 invalid input, 2 solver non-convergence,
// 3 verification failure.

namespace sosgap {

namespace detail {

/// Largest instance size run without --force, per degree parameter.
inline int desk_cap(int t) {
    switch (t) {
        case 1: return 14;
        case 2: return 12;
        case 3: return 8;
        default: return 7;
    }
}

inline bool write_payload(const std::string& path, const std::string& payload, std::ostream& out,
                          std::ostream& err) {
    if (path.empty()) {
        out << payload;
        return true;
    }
    std::ofstream f(path);
    if (!f) {
        err << "cannot open output file: " << path << "\n";
        return false;
    }
    f << payload;
    return true;
}

inline std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

/// Runs one CLI invocation.  `args` excludes the program name.
inline int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sum-of-squares relaxation toolkit for knapsack"};
    app.name("sosgap");
    app.require_subcommand(1);

    const std::map<std::string, Family> family_names{{"uniform", Family::Uniform},
                                                     {"unitcap", Family::UnitCapacity},
                                                     {"correlated", Family::Correlated}};

    GeneratorSpec spec;
    std::string out_path;
    std::string format = "text";
    std::string instance_path;
    int degree = 2;
    std::vector<int> degrees{2, 3};
    int count = 10;
    int threads = 0;
    bool force = false;
    SolverConfig solver;

    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
        cmd->add_option("-o,--output", out_path, "write output to this file instead of stdout");
    };
    const auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--tol", solver.tol, "solver residual tolerance");
        cmd->add_option("--max-iters", solver.max_iters, "solver iteration cap");
        cmd->add_flag("--force", force, "bypass the desk-scale size caps");
    };
    const auto add_family = [&](CLI::App* cmd) {
        cmd->add_option("--family", spec.family, "instance family")
            ->transform(CLI::CheckedTransformer(family_names, CLI::ignore_case));
        cmd->add_option("-n", spec.n, "number of items");
        cmd->add_option("--value-min", spec.value_min, "lower end of the value range");
        cmd->add_option("--value-max", spec.value_max, "upper end of the value range");
        cmd->add_option("--budget-fraction", spec.budget_fraction,
                        "budget as a fraction of total capacity (uniform/correlated)");
        cmd->add_option("--k", spec.k, "cardinality parameter (unitcap: budget k + 1/2)");
        cmd->add_option("--noise", spec.noise, "value jitter amplitude (correlated)");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a seeded instance file");
    add_family(gen);
    gen->add_option("--seed", spec.seed, "instance seed");
    gen->add_option("-o,--output", out_path, "write the instance to this file instead of stdout");

    CLI::App* opt_cmd = app.add_subcommand("opt", "exact 0/1 optimum");
    opt_cmd->add_option("file", instance_path, "instance file")->required();
    add_format(opt_cmd);

    CLI::App* lp_cmd = app.add_subcommand("lp", "fractional relaxation value");
    lp_cmd->add_option("file", instance_path, "instance file")->required();
    add_format(lp_cmd);

    CLI::App* sos_cmd = app.add_subcommand("sos", "solve the degree-2t moment relaxation");
    sos_cmd->add_option("file", instance_path, "instance file")->required();
    sos_cmd->add_option("--degree", degree, "degree parameter t")->required()->check(CLI::PositiveNumber);
    sos_cmd->add_option("--seed", solver.seed, "solver initialization seed");
    add_solver(sos_cmd);
    add_format(sos_cmd);

    CLI::App* gap_cmd = app.add_subcommand("gap", "compare relaxation, optimum, and guaranteed bound");
    gap_cmd->add_option("file", instance_path, "instance file")->required();
    gap_cmd->add_option("--degree", degree, "degree parameter t")->required()->check(CLI::PositiveNumber);
    gap_cmd->add_option("--seed", solver.seed, "solver initialization seed");
    add_solver(gap_cmd);
    add_format(gap_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "structural checks on solved moments");
    verify_cmd->add_option("file", instance_path, "instance file")->required();
    verify_cmd->add_option("--degree", degree, "degree parameter t")->required()->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", solver.seed, "solver initialization seed");
    add_solver(verify_cmd);
    add_format(verify_cmd);

    CLI::App* batch_cmd = app.add_subcommand("batch", "seeded multi-instance experiment");
    add_family(batch_cmd);
    batch_cmd->add_option("--seed", spec.seed, "base instance seed (instance i uses seed + i)");
    batch_cmd->add_option("--count", count, "number of instances")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--degrees", degrees, "degree parameters, comma separated")->delimiter(',');
    batch_cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    batch_cmd->add_option("--solver-seed", solver.seed, "solver initialization seed");
    add_solver(batch_cmd);
    add_format(batch_cmd);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        if (gen->parsed()) {
            const KnapsackInstance inst = generate(spec);
            std::ostringstream payload;
            write_instance(inst, payload);
            return detail::write_payload(out_path, payload.str(), out, err) ? 0 : 1;
        }

        if (opt_cmd->parsed() || lp_cmd->parsed()) {
            const KnapsackInstance inst = read_instance_file(instance_path);
            const bool is_opt = opt_cmd->parsed();
            const double value = is_opt ? opt_exact(inst) : lp_value(inst);
            std::string payload;
            if (format == "json") {
                nlohmann::ordered_json j;
                j[is_opt ? "opt" : "lp"] = value;
                payload = j.dump(2) + "\n";
            } else {
                payload = detail::format_number(value) + "\n";
            }
            return detail::write_payload(out_path, payload, out, err) ? 0 : 1;
        }

        if (sos_cmd->parsed() || gap_cmd->parsed() || verify_cmd->parsed()) {
            const KnapsackInstance inst = read_instance_file(instance_path);
            if (inst.size() > detail::desk_cap(degree) && !force) {
                err << "instance has " << inst.size() << " items, above the desk cap "
                    << detail::desk_cap(degree) << " for degree " << degree << "; rerun with --force\n";
                return 1;
            }

            if (sos_cmd->parsed()) {
                const SosRun run = sos_value(inst, degree, solver);
                std::string payload;
                if (format == "json") {
                    nlohmann::ordered_json j;
                    j["sos"] = run.value;
                    j["status"] = status_name(run.solution.status);
                    j["residuals"] = {{"equality", run.solution.equality_residual},
                                      {"box", run.solution.box_violation},
                                      {"min_block_eigenvalue", run.solution.min_block_eigenvalue},
                                      {"consistency", run.solution.consistency_residual},
                                      {"dual", run.solution.dual_residual},
                                      {"iterations", run.solution.iterations}};
                    payload = j.dump(2) + "\n";
                } else {
                    payload = detail::format_number(run.value) + "\n";
                }
                if (!detail::write_payload(out_path, payload, out, err)) return 1;
                if (run.solution.status != SolveStatus::Converged) {
                    err << "solver hit the iteration cap; residuals in the json output\n";
                    return 2;
                }
                return 0;
            }

            GapReport report;
            report.instance_digest = instance_digest(inst);
            report.opt = opt_exact(inst);
            report.lp = lp_value(inst);
            report.runs.push_back(run_gap_entry(inst, degree, report.opt, solver));
            const GapRunEntry& entry = report.runs.front();

            const std::string payload =
                format == "json" ? report_to_json(report).dump(2) + "\n" : report_to_text(report);
            if (!detail::write_payload(out_path, payload, out, err)) return 1;
            if (entry.inconclusive) {
                err << "solver hit the iteration cap; result inconclusive\n";
                return 2;
            }
            if (gap_cmd->parsed()) {
                if (entry.has_bound && entry.has_ratio && !entry.bound_pass) {
                    err << "gap ratio " << entry.ratio << " exceeds the bound " << entry.bound << "\n";
                    return 3;
                }
                return 0;
            }
            if (!entry.lemmas.all_pass()) {
                err << "structural checks failed; details in the report\n";
                return 3;
            }
            return 0;
        }

        if (batch_cmd->parsed()) {
            const int cap = [&] {
                int c = kMaxItems;
                for (int t : degrees) c = std::min(c, detail::desk_cap(t));
                return c;
            }();
            for (int t : degrees)
                if (t < 1) {
                    err << "degrees must be at least 1\n";
                    return 1;
                }
            if (spec.n > cap && !force) {
                err << "n=" << spec.n << " is above the desk cap " << cap
                    << " for the requested degrees; rerun with --force\n";
                return 1;
            }
            std::vector<KnapsackInstance> instances;
            const std::uint64_t base_seed = spec.seed;
            for (int i = 0; i < count; ++i) {
                GeneratorSpec s = spec;
                s.seed = base_seed + static_cast<std::uint64_t>(i);
                instances.push_back(generate(s));
            }
            const BatchResult result = run_batch(instances, degrees, solver, Tolerance{}, 1e-4, threads);

            bool any_violation = false, any_capped = false;
            for (const GapReport& r : result.reports)
                for (const GapRunEntry& e : r.runs) {
                    if (e.inconclusive) any_capped = true;
                    if (!e.inconclusive && e.has_bound && e.has_ratio && !e.bound_pass) any_violation = true;
                }

            std::string payload;
            if (format == "json") {
                nlohmann::ordered_json j;
                j["count"] = count;
                j["degrees"] = degrees;
                j["reports"] = nlohmann::ordered_json::array();
                for (const GapReport& r : result.reports) j["reports"].push_back(report_to_json(r));
                j["worst_ratio_per_degree"] = nlohmann::ordered_json::object();
                for (const auto& [t, ratio] : result.worst_ratio_per_degree)
                    j["worst_ratio_per_degree"][std::to_string(t)] = ratio;
                j["failures"] = result.failures;
                payload = j.dump(2) + "\n";
            } else {
                std::ostringstream os;
                for (const GapReport& r : result.reports) os << report_to_text(r) << "\n";
                os << "worst ratio per degree:";
                for (const auto& [t, ratio] : result.worst_ratio_per_degree) os << " t=" << t << ":" << ratio;
                os << "\nfailures: " << result.failures.size() << "\n";
                for (const std::string& f : result.failures) os << "  " << f << "\n";
                payload = os.str();
            }
            if (!detail::write_payload(out_path, payload, out, err)) return 1;
            if (any_violation) return 3;
            if (any_capped) return 2;
            if (!result.failures.empty()) return 1;
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;  // unreachable: a subcommand is required
}

}  // namespace sosgap
