#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcindex/csv.hpp"
#include "rcindex/errors.hpp"

namespace rcindex {

enum class Transform { none, log1p_ };
enum class MissingPolicy { recode_zero, country_mean, drop_variable };
enum class GroupHint { capacity, governance, outcome, unassigned };

inline std::string to_string(Transform t) {
    return t == Transform::log1p_ ? "log1p" : "none";
}
inline std::string to_string(MissingPolicy p) {
    switch (p) {
        case MissingPolicy::recode_zero: return "recode_zero";
        case MissingPolicy::country_mean: return "country_mean";
        default: return "drop_variable";
    }
}
inline std::string to_string(GroupHint g) {
    switch (g) {
        case GroupHint::capacity: return "capacity";
        case GroupHint::governance: return "governance";
        case GroupHint::outcome: return "outcome";
        default: return "unassigned";
    }
}

inline Transform transform_from_string(const std::string& s) {
    if (s == "none") return Transform::none;
    if (s == "log1p") return Transform::log1p_;
    throw validation_error("unknown transform: " + s);
}
inline MissingPolicy missing_policy_from_string(const std::string& s) {
    if (s == "recode_zero") return MissingPolicy::recode_zero;
    if (s == "country_mean") return MissingPolicy::country_mean;
    if (s == "drop_variable") return MissingPolicy::drop_variable;
    throw validation_error("unknown missing_policy: " + s);
}
inline GroupHint group_hint_from_string(const std::string& s) {
    if (s == "capacity") return GroupHint::capacity;
    if (s == "governance") return GroupHint::governance;
    if (s == "outcome") return GroupHint::outcome;
    if (s == "unassigned") return GroupHint::unassigned;
    throw validation_error("unknown group_hint: " + s);
}

struct VariableSpec {
    std::string name;           // analysis name, e.g. ln_RD
    std::string source_column;  // CSV column, e.g. RD
    Transform transform = Transform::none;
    MissingPolicy missing_policy = MissingPolicy::country_mean;
    GroupHint group_hint = GroupHint::unassigned;
};

using Dictionary = std::vector<VariableSpec>;

inline void validate_dictionary(const Dictionary& dict) {
    if (dict.empty()) throw validation_error("data dictionary is empty");
    std::set<std::string> names;
    for (const auto& spec : dict) {
        if (spec.name.empty()) throw validation_error("dictionary entry with empty name");
        if (spec.source_column.empty())
            throw validation_error("dictionary entry '" + spec.name + "' has empty source_column");
        if (!names.insert(spec.name).second)
            throw validation_error("duplicate variable name in dictionary: " + spec.name);
    }
}

inline nlohmann::json dictionary_to_json(const Dictionary& dict) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& spec : dict) {
        arr.push_back({{"name", spec.name},
                       {"source_column", spec.source_column},
                       {"transform", to_string(spec.transform)},
                       {"missing_policy", to_string(spec.missing_policy)},
                       {"group_hint", to_string(spec.group_hint)}});
    }
    return arr;
}

inline Dictionary dictionary_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw validation_error("data dictionary must be a JSON array");
    Dictionary dict;
    for (const auto& item : arr) {
        VariableSpec spec;
        spec.name = item.at("name").get<std::string>();
        spec.source_column = item.value("source_column", spec.name);
        spec.transform = transform_from_string(item.value("transform", "none"));
        spec.missing_policy =
            missing_policy_from_string(item.value("missing_policy", "country_mean"));
        spec.group_hint = group_hint_from_string(item.value("group_hint", "unassigned"));
        dict.push_back(std::move(spec));
    }
    validate_dictionary(dict);
    return dict;
}

inline Dictionary load_dictionary(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error("cannot parse dictionary " + path + ": " + e.what());
    }
    return dictionary_from_json(j);
}

// The shipped default: the 14 index variables plus the FWCI outcome, with
// the transforms and missing-data policies the analysis uses out of the box.
// RuleLaw's upstream provenance is ambiguous (see README); it changes nothing
// about how the column is processed.
inline Dictionary default_dictionary() {
    auto cap = [](const char* name, const char* src) {
        return VariableSpec{name, src, Transform::log1p_, MissingPolicy::country_mean,
                            GroupHint::capacity};
    };
    auto gov = [](const char* name) {
        return VariableSpec{name, name, Transform::none, MissingPolicy::country_mean,
                            GroupHint::governance};
    };
    Dictionary dict;
    dict.push_back({"ln_RD", "RD", Transform::log1p_, MissingPolicy::recode_zero,
                    GroupHint::capacity});
    dict.push_back({"ln_ResPatent", "ResPatent", Transform::log1p_, MissingPolicy::recode_zero,
                    GroupHint::capacity});
    dict.push_back(cap("ln_AcadInst", "AcadInst"));
    dict.push_back(cap("ln_NonAcadInst", "NonAcadInst"));
    dict.push_back(cap("ln_Authors", "Authors"));
    dict.push_back(cap("ln_Pubs", "Pubs"));
    dict.push_back(cap("ln_IntlPubs", "IntlPubs"));
    dict.push_back(gov("OpenInternet"));
    dict.push_back(gov("RuleLaw"));
    dict.push_back(gov("RegQual"));
    dict.push_back(gov("Stability"));
    dict.push_back(gov("NonCorrupt"));
    dict.push_back(gov("Polyarchy"));
    dict.push_back(gov("AcadFreedom"));
    dict.push_back({"FWCI", "FWCI", Transform::none, MissingPolicy::country_mean,
                    GroupHint::outcome});
    // low-coverage column, dropped when present
    dict.push_back({"TertiaryEnrol", "TertiaryEnrol", Transform::none,
                    MissingPolicy::drop_variable, GroupHint::unassigned});
    return dict;
}

}  // namespace rcindex
