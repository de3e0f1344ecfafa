#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sosgap/gap.hpp"
#include "sosgap/knapsack.hpp"

// File formats.  Instances are JSON objects
//   {"capacity": C, "items": [{"value": v, "capacity": c}, ...]}
// with item order defining the index.  Gap reports serialize as
//   {"instance_digest", "opt", "lp", "runs": [...]}
// with one entry per degree; both layouts are stable external interfaces.
// Serialized reports carry no timing fields, so identical inputs give
// byte-identical bytes.

namespace sosgap {

inline nlohmann::ordered_json instance_to_json(const KnapsackInstance& inst) {
    validate(inst);
    nlohmann::ordered_json j;
    j["capacity"] = inst.capacity;
    j["items"] = nlohmann::ordered_json::array();
    for (int i = 0; i < inst.size(); ++i)
        j["items"].push_back({{"value", inst.values[i]}, {"capacity", inst.item_capacities[i]}});
    return j;
}

inline KnapsackInstance instance_from_json(const nlohmann::json& j) {
    try {
        KnapsackInstance inst;
        inst.capacity = j.at("capacity").get<double>();
        for (const auto& item : j.at("items")) {
            inst.values.push_back(item.at("value").get<double>());
            inst.item_capacities.push_back(item.at("capacity").get<double>());
        }
        validate(inst);
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance json: ") + e.what());
    }
}

inline void write_instance(const KnapsackInstance& inst, std::ostream& os) {
    os << instance_to_json(inst).dump(2) << "\n";
}

inline KnapsackInstance read_instance(std::istream& is) {
    try {
        nlohmann::json j = nlohmann::json::parse(is);
        return instance_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance json: ") + e.what());
    }
}

inline KnapsackInstance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open instance file: " + path);
    return read_instance(in);
}

inline const char* status_name(SolveStatus s) {
    return s == SolveStatus::Converged ? "converged" : "iteration_cap";
}

inline nlohmann::ordered_json run_entry_to_json(const GapRunEntry& e) {
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["sos"] = e.sos;
    if (e.has_ratio) j["ratio"] = e.ratio;
    if (e.has_bound) j["bound"] = e.bound;
    j["status"] = status_name(e.status);
    j["bound_pass"] = e.bound_pass;
    j["inconclusive"] = e.inconclusive;
    j["residuals"] = {{"equality", e.residuals.equality},
                      {"box", e.residuals.box},
                      {"min_block_eigenvalue", e.residuals.min_block_eigenvalue},
                      {"consistency", e.residuals.consistency},
                      {"dual", e.residuals.dual},
                      {"iterations", e.residuals.iterations}};
    j["lemmas"] = {{"vanishing",
                    {{"applicable", e.lemmas.vanishing.applicable},
                     {"k", e.lemmas.vanishing.k},
                     {"max_abs", e.lemmas.vanishing.max_abs},
                     {"pass", e.lemmas.vanishing.pass}}},
                   {"local",
                    {{"sets_checked", e.lemmas.local.sets_checked},
                     {"worst_mass", e.lemmas.local.worst_mass},
                     {"worst_total_error", e.lemmas.local.worst_total_error},
                     {"worst_moment_error", e.lemmas.local.worst_moment_error},
                     {"pass", e.lemmas.local.pass}}},
                   {"y",
                    {{"windows_checked", e.lemmas.y.windows_checked},
                     {"skipped", e.lemmas.y.skipped},
                     {"y_min", e.lemmas.y.y_min},
                     {"y_max", e.lemmas.y.y_max},
                     {"worst_transfer", e.lemmas.y.worst_transfer},
                     {"transfer_allowance", e.lemmas.y.transfer_allowance},
                     {"pass", e.lemmas.y.pass}}},
                   {"reduction",
                    {{"pass_count", e.lemmas.reduction.pass_count},
                     {"fail_count", e.lemmas.reduction.fail_count},
                     {"premise_unmet", e.lemmas.reduction.premise_unmet},
                     {"pass", e.lemmas.reduction.pass}}}};
    return j;
}

inline nlohmann::ordered_json report_to_json(const GapReport& r) {
    nlohmann::ordered_json j;
    j["instance_digest"] = r.instance_digest;
    j["opt"] = r.opt;
    j["lp"] = r.lp;
    j["runs"] = nlohmann::ordered_json::array();
    for (const GapRunEntry& e : r.runs) j["runs"].push_back(run_entry_to_json(e));
    return j;
}

inline std::string report_to_text(const GapReport& r) {
    std::ostringstream os;
    os << "instance " << r.instance_digest << "\n";
    os << "opt " << r.opt << "\nlp " << r.lp << "\n";
    for (const GapRunEntry& e : r.runs) {
        os << "t=" << e.t << " sos=" << e.sos;
        if (e.has_ratio) os << " ratio=" << e.ratio;
        if (e.has_bound) os << " bound=" << e.bound;
        os << " status=" << status_name(e.status);
        if (e.has_bound) os << " bound_pass=" << (e.bound_pass ? "yes" : "no");
        os << " lemmas=" << (e.lemmas.all_pass() ? "pass" : "fail") << "\n";
    }
    return os.str();
}

}  // namespace sosgap
