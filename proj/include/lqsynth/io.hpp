#pragma once

#include "lqsynth/assembly.hpp"
#include "lqsynth/static_decomposition.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace lqsynth {

using json = nlohmann::ordered_json;

using system_variant = std::variant<passive_lqss, general_lqss>;

json system_to_json(const system_variant& sys);
system_variant system_from_json(const json& j);
system_variant load_system(const std::filesystem::path& path);
void save_system(const system_variant& sys, const std::filesystem::path& path);

// A synthesized network plus optional elementary decompositions of its static blocks
// (keyed by role: "pre_network", "post_network", "feedback_gain") and an optional
// verification report.
struct netlist_file {
    int format_version = 1;
    std::variant<cascade_realization, feedback_realization> realization;
    std::map<std::string, static_decomposition> static_elements;
    std::optional<equivalence_report> verification;
};

json netlist_to_json(const netlist_file& nf);
netlist_file netlist_from_json(const json& j);
netlist_file load_netlist(const std::filesystem::path& path);
void save_netlist(const netlist_file& nf, const std::filesystem::path& path);

json report_to_json(const equivalence_report& rep);
equivalence_report report_from_json(const json& j);

json decomposition_to_json(const static_decomposition& d);
static_decomposition decomposition_from_json(const json& j);

// Complex matrices serialize as nested row-major arrays of [re, im] pairs.
json matrix_to_json(const cmat& a);
cmat matrix_from_json(const json& j, const std::string& field);

}  // namespace lqsynth
