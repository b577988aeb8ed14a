#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcindex/csv.hpp"
#include "rcindex/dictionary.hpp"
#include "rcindex/errors.hpp"
#include "rcindex/matrix.hpp"
#include "rcindex/prob.hpp"

namespace rcindex {

struct CountryInfo {
    std::string code;
    std::string name;
    std::string region;
};

// Country-year-variable panel. Missing cells are NaN. Countries are kept
// sorted by code so every downstream ordering is deterministic.
struct Panel {
    std::vector<CountryInfo> countries;
    int year_from = 0;
    int year_to = -1;  // inclusive
    std::vector<std::string> variables;  // analysis names, dictionary order
    std::vector<double> values;          // [country][year][variable]

    int n_years() const { return year_to - year_from + 1; }

    std::size_t cell(std::size_t c, int year, std::size_t v) const {
        return (c * static_cast<std::size_t>(n_years()) +
                static_cast<std::size_t>(year - year_from)) * variables.size() + v;
    }
    double value(std::size_t c, int year, std::size_t v) const {
        return values[cell(c, year, v)];
    }
    bool missing(std::size_t c, int year, std::size_t v) const {
        return std::isnan(value(c, year, v));
    }
    std::size_t var_index(const std::string& name) const {
        auto it = std::find(variables.begin(), variables.end(), name);
        if (it == variables.end())
            throw validation_error("variable not in panel: " + name);
        return static_cast<std::size_t>(it - variables.begin());
    }
};

struct CrossSection {
    std::vector<CountryInfo> countries;  // sorted by code
    std::vector<std::string> variables;
    Matrix values;  // countries x variables, no missing

    std::size_t var_index(const std::string& name) const {
        auto it = std::find(variables.begin(), variables.end(), name);
        if (it == variables.end())
            throw validation_error("variable not in cross-section: " + name);
        return static_cast<std::size_t>(it - variables.begin());
    }
};

inline Panel load_panel(const std::string& csv_path, const Dictionary& dict) {
    validate_dictionary(dict);
    const auto rows = read_csv(csv_path);
    if (rows.size() < 2) throw validation_error("panel CSV has no data rows: " + csv_path);

    const auto& header = rows.front();
    if (header.size() < 5 || header[0] != "country_code" || header[1] != "country_name" ||
        header[2] != "region" || header[3] != "year")
        throw validation_error(
            "panel CSV header must start with country_code,country_name,region,year");

    std::map<std::string, std::size_t> col_of;
    for (std::size_t j = 4; j < header.size(); ++j) col_of[header[j]] = j;

    // resolve dictionary variables to CSV columns; drop-policy variables may
    // be absent (they are removed later anyway)
    std::vector<std::pair<std::string, std::size_t>> loaded;  // analysis name -> csv col
    for (const auto& spec : dict) {
        auto it = col_of.find(spec.source_column);
        if (it == col_of.end()) {
            if (spec.missing_policy == MissingPolicy::drop_variable) continue;
            throw validation_error("dictionary variable '" + spec.name +
                                   "' references unknown column '" + spec.source_column + "'");
        }
        loaded.emplace_back(spec.name, it->second);
    }
    if (loaded.empty()) throw validation_error("no dictionary variables found in CSV");

    struct RawRow {
        std::string code, name, region;
        int year;
        std::size_t csv_line;
        const std::vector<std::string>* fields;
    };
    std::vector<RawRow> raw;
    std::map<std::string, CountryInfo> country_of;
    int ymin = std::numeric_limits<int>::max(), ymax = std::numeric_limits<int>::min();

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() == 1 && f[0].empty()) continue;  // trailing blank line
        if (f.size() != header.size())
            throw validation_error("row " + std::to_string(r + 1) + " has " +
                                   std::to_string(f.size()) + " fields, expected " +
                                   std::to_string(header.size()));
        RawRow row;
        row.code = f[0];
        row.name = f[1];
        row.region = f[2];
        if (row.code.empty())
            throw validation_error("row " + std::to_string(r + 1) + " has empty country_code");
        if (row.region.empty())
            throw validation_error("country " + row.code + " has empty region (row " +
                                   std::to_string(r + 1) + ")");
        row.year = static_cast<int>(
            parse_double(f[3], "row " + std::to_string(r + 1) + ", column year"));
        row.csv_line = r + 1;
        row.fields = &f;
        ymin = std::min(ymin, row.year);
        ymax = std::max(ymax, row.year);

        auto [it, inserted] = country_of.try_emplace(row.code,
                                                     CountryInfo{row.code, row.name, row.region});
        if (!inserted && it->second.region != row.region)
            throw validation_error("country " + row.code + " has conflicting regions '" +
                                   it->second.region + "' and '" + row.region + "'");
        raw.push_back(row);
    }
    if (raw.empty()) throw validation_error("panel CSV has no data rows: " + csv_path);

    Panel panel;
    panel.year_from = ymin;
    panel.year_to = ymax;
    for (auto& [code, info] : country_of) panel.countries.push_back(info);  // map is sorted
    for (const auto& [name, col] : loaded) panel.variables.push_back(name);
    panel.values.assign(panel.countries.size() * static_cast<std::size_t>(panel.n_years()) *
                            panel.variables.size(),
                        std::numeric_limits<double>::quiet_NaN());

    std::map<std::string, std::size_t> country_index;
    for (std::size_t c = 0; c < panel.countries.size(); ++c)
        country_index[panel.countries[c].code] = c;

    std::vector<std::vector<bool>> seen(panel.countries.size(),
                                        std::vector<bool>(panel.n_years(), false));
    for (const auto& row : raw) {
        const std::size_t c = country_index[row.code];
        const int y = row.year - panel.year_from;
        if (seen[c][static_cast<std::size_t>(y)])
            throw validation_error("duplicate row for (" + row.code + ", " +
                                   std::to_string(row.year) + ") at line " +
                                   std::to_string(row.csv_line));
        seen[c][static_cast<std::size_t>(y)] = true;
        for (std::size_t v = 0; v < loaded.size(); ++v) {
            const std::string& cell_text = (*row.fields)[loaded[v].second];
            if (cell_text.empty()) continue;  // missing
            panel.values[panel.cell(c, row.year, v)] =
                parse_double(cell_text, "line " + std::to_string(row.csv_line) + ", column " +
                                            loaded[v].first);
        }
    }
    return panel;
}

inline const VariableSpec& spec_for(const Dictionary& dict, const std::string& analysis_name) {
    for (const auto& spec : dict)
        if (spec.name == analysis_name) return spec;
    throw validation_error("no dictionary entry for variable: " + analysis_name);
}

// Apply the per-variable missing-data policies. Idempotent: once a
// variable has been filled (or dropped) a second pass is a no-op.
inline Panel apply_missing_policy(const Panel& panel, const Dictionary& dict) {
    Panel out;
    out.countries = panel.countries;
    out.year_from = panel.year_from;
    out.year_to = panel.year_to;
    for (const auto& name : panel.variables) {
        if (spec_for(dict, name).missing_policy != MissingPolicy::drop_variable)
            out.variables.push_back(name);
    }
    out.values.assign(out.countries.size() * static_cast<std::size_t>(out.n_years()) *
                          out.variables.size(),
                      std::numeric_limits<double>::quiet_NaN());

    for (std::size_t v_out = 0; v_out < out.variables.size(); ++v_out) {
        const std::string& name = out.variables[v_out];
        const std::size_t v_in = panel.var_index(name);
        const MissingPolicy policy = spec_for(dict, name).missing_policy;
        for (std::size_t c = 0; c < panel.countries.size(); ++c) {
            double sum = 0.0;
            int n = 0;
            for (int y = panel.year_from; y <= panel.year_to; ++y) {
                if (!panel.missing(c, y, v_in)) {
                    sum += panel.value(c, y, v_in);
                    ++n;
                }
            }
            for (int y = panel.year_from; y <= panel.year_to; ++y) {
                double val = panel.value(c, y, v_in);
                if (std::isnan(val)) {
                    if (policy == MissingPolicy::recode_zero) {
                        val = 0.0;
                    } else {  // country_mean
                        if (n == 0)
                            throw validation_error("country " + panel.countries[c].code +
                                                   " has no observations for variable " + name +
                                                   " (country_mean policy)");
                        val = sum / n;
                    }
                }
                out.values[out.cell(c, y, v_out)] = val;
            }
        }
    }
    return out;
}

struct ExcludedCountry {
    std::string code;
    std::vector<std::string> missing_variables;
};

// Countries with zero observations for a country_mean variable cannot be
// imputed; the pipeline excludes them explicitly and reports the list
// (the strict operation apply_missing_policy throws instead).
inline std::pair<Panel, std::vector<ExcludedCountry>> screen_incomplete_countries(
    const Panel& panel, const Dictionary& dict) {
    std::vector<ExcludedCountry> excluded;
    std::vector<bool> keep(panel.countries.size(), true);
    for (std::size_t c = 0; c < panel.countries.size(); ++c) {
        ExcludedCountry entry{panel.countries[c].code, {}};
        for (std::size_t v = 0; v < panel.variables.size(); ++v) {
            if (spec_for(dict, panel.variables[v]).missing_policy != MissingPolicy::country_mean)
                continue;
            bool any = false;
            for (int y = panel.year_from; y <= panel.year_to && !any; ++y)
                any = !panel.missing(c, y, v);
            if (!any) entry.missing_variables.push_back(panel.variables[v]);
        }
        if (!entry.missing_variables.empty()) {
            keep[c] = false;
            excluded.push_back(std::move(entry));
        }
    }
    if (excluded.empty()) return {panel, excluded};

    Panel out;
    out.year_from = panel.year_from;
    out.year_to = panel.year_to;
    out.variables = panel.variables;
    for (std::size_t c = 0; c < panel.countries.size(); ++c)
        if (keep[c]) out.countries.push_back(panel.countries[c]);
    out.values.reserve(out.countries.size() * static_cast<std::size_t>(out.n_years()) *
                       out.variables.size());
    for (std::size_t c = 0; c < panel.countries.size(); ++c) {
        if (!keep[c]) continue;
        const std::size_t begin = panel.cell(c, panel.year_from, 0);
        const std::size_t end = begin + static_cast<std::size_t>(panel.n_years()) *
                                            panel.variables.size();
        out.values.insert(out.values.end(), panel.values.begin() + begin,
                          panel.values.begin() + end);
    }
    return {out, excluded};
}

inline CrossSection collapse_to_cross_section(const Panel& panel, int year_from, int year_to) {
    if (year_from > year_to)
        throw validation_error("empty year range: " + std::to_string(year_from) + ".." +
                               std::to_string(year_to));
    if (year_from < panel.year_from || year_to > panel.year_to)
        throw validation_error("year range " + std::to_string(year_from) + ".." +
                               std::to_string(year_to) + " outside panel range " +
                               std::to_string(panel.year_from) + ".." +
                               std::to_string(panel.year_to));
    CrossSection cs;
    cs.countries = panel.countries;
    cs.variables = panel.variables;
    cs.values = Matrix(panel.countries.size(), panel.variables.size());
    const double ny = static_cast<double>(year_to - year_from + 1);
    for (std::size_t c = 0; c < panel.countries.size(); ++c)
        for (std::size_t v = 0; v < panel.variables.size(); ++v) {
            double sum = 0.0;
            for (int y = year_from; y <= year_to; ++y) {
                if (panel.missing(c, y, v))
                    throw validation_error("missing cell for (" + panel.countries[c].code + ", " +
                                           std::to_string(y) + ", " + panel.variables[v] +
                                           "); apply missing policies before collapsing");
                sum += panel.value(c, y, v);
            }
            cs.values(c, v) = sum / ny;
        }
    return cs;
}

inline CrossSection apply_transforms(const CrossSection& cs, const Dictionary& dict) {
    CrossSection out = cs;
    for (std::size_t v = 0; v < cs.variables.size(); ++v) {
        if (spec_for(dict, cs.variables[v]).transform != Transform::log1p_) continue;
        for (std::size_t c = 0; c < cs.countries.size(); ++c) {
            const double x = cs.values(c, v);
            if (x < 0.0)
                throw validation_error("log1p of negative value " + fmt17(x) + " at (" +
                                       cs.countries[c].code + ", " + cs.variables[v] + ")");
            out.values(c, v) = std::log1p(x);
        }
    }
    return out;
}

struct DescriptiveRow {
    std::string variable;
    std::size_t n;
    double mean, sd, min, max;
};

inline std::vector<DescriptiveRow> describe(const CrossSection& cs) {
    if (cs.countries.empty() || cs.variables.empty())
        throw validation_error("describe: empty cross-section");
    std::vector<DescriptiveRow> table;
    for (std::size_t v = 0; v < cs.variables.size(); ++v) {
        auto col = cs.values.column(v);
        DescriptiveRow row;
        row.variable = cs.variables[v];
        row.n = col.size();
        row.mean = mean_of(col);
        row.sd = sample_sd(col);
        row.min = *std::min_element(col.begin(), col.end());
        row.max = *std::max_element(col.begin(), col.end());
        table.push_back(row);
    }
    return table;
}

// ---- serialization ----

inline std::string cross_section_to_csv(const CrossSection& cs) {
    std::string out = "country_code,country_name,region";
    for (const auto& v : cs.variables) out += "," + csv_escape(v);
    out += "\n";
    for (std::size_t c = 0; c < cs.countries.size(); ++c) {
        out += csv_escape(cs.countries[c].code) + "," + csv_escape(cs.countries[c].name) + "," +
               csv_escape(cs.countries[c].region);
        for (std::size_t v = 0; v < cs.variables.size(); ++v) out += "," + fmt17(cs.values(c, v));
        out += "\n";
    }
    return out;
}

inline CrossSection cross_section_from_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) throw validation_error("cross-section CSV has no data rows: " + path);
    const auto& header = rows.front();
    if (header.size() < 4 || header[0] != "country_code" || header[1] != "country_name" ||
        header[2] != "region")
        throw validation_error("cross-section CSV header must start with "
                               "country_code,country_name,region");
    CrossSection cs;
    for (std::size_t j = 3; j < header.size(); ++j) cs.variables.push_back(header[j]);
    cs.values = Matrix(rows.size() - 1, cs.variables.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() != header.size())
            throw validation_error("cross-section row " + std::to_string(r + 1) +
                                   " has wrong field count");
        cs.countries.push_back({f[0], f[1], f[2]});
        for (std::size_t v = 0; v < cs.variables.size(); ++v)
            cs.values(r - 1, v) = parse_double(f[3 + v], "line " + std::to_string(r + 1) +
                                                             ", column " + cs.variables[v]);
    }
    for (std::size_t c = 1; c < cs.countries.size(); ++c)
        if (cs.countries[c - 1].code >= cs.countries[c].code)
            throw validation_error("cross-section rows not sorted by country code");
    return cs;
}

inline nlohmann::json cross_section_to_json(const CrossSection& cs) {
    nlohmann::json countries = nlohmann::json::array();
    for (const auto& c : cs.countries)
        countries.push_back({{"code", c.code}, {"name", c.name}, {"region", c.region}});
    nlohmann::json matrix = nlohmann::json::array();
    for (std::size_t c = 0; c < cs.countries.size(); ++c) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t v = 0; v < cs.variables.size(); ++v) row.push_back(cs.values(c, v));
        matrix.push_back(row);
    }
    return {{"countries", countries}, {"variables", cs.variables}, {"matrix", matrix}};
}

inline std::string descriptives_to_csv(const std::vector<DescriptiveRow>& table) {
    std::string out = "variable,n,mean,sd,min,max\n";
    for (const auto& r : table)
        out += csv_escape(r.variable) + "," + std::to_string(r.n) + "," + fmt17(r.mean) + "," +
               fmt17(r.sd) + "," + fmt17(r.min) + "," + fmt17(r.max) + "\n";
    return out;
}

inline nlohmann::json descriptives_to_json(const std::vector<DescriptiveRow>& table) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : table)
        arr.push_back({{"variable", r.variable},
                       {"n", r.n},
                       {"mean", r.mean},
                       {"sd", r.sd},
                       {"min", r.min},
                       {"max", r.max}});
    return arr;
}

}  // namespace rcindex
