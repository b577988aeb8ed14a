#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcindex/csv.hpp"
#include "rcindex/errors.hpp"
#include "rcindex/matrix.hpp"
#include "rcindex/panel.hpp"
#include "rcindex/rng.hpp"

namespace rcindex {

// One synthetic indicator. Per country-year the latent value is
//   y = loading_capacity * f1 + loading_governance * f2 + noise_sd * eps
// and the emitted cell is location + scale * y, pushed through
// expm1 (and floored at 0) for count-like variables so the log1p
// pipeline has real work to do.
struct SynthVariable {
    std::string name;  // source column name
    double loading_capacity = 0.0;
    double loading_governance = 0.0;
    bool count_like = false;
    double location = 0.0;
    double scale = 1.0;
};

struct SynthSpec {
    std::vector<SynthVariable> variables;
    double noise_sd = 0.35;
    int n_regions = 10;
};

// Standardized loadings implied by a spec: l / sqrt(|l|^2 + noise^2).
// This is the ground truth the EFA recovery oracle compares against.
inline Matrix implied_standardized_loadings(const SynthSpec& spec) {
    Matrix t(spec.variables.size(), 2);
    for (std::size_t j = 0; j < spec.variables.size(); ++j) {
        const auto& v = spec.variables[j];
        const double total = std::sqrt(v.loading_capacity * v.loading_capacity +
                                       v.loading_governance * v.loading_governance +
                                       spec.noise_sd * spec.noise_sd);
        t(j, 0) = v.loading_capacity / total;
        t(j, 1) = v.loading_governance / total;
    }
    return t;
}

// Demonstration spec shaped like the published two-factor solution:
// raw loadings are chosen so the implied standardized loadings equal the
// target pair exactly, and location/scale put the count-like columns on
// published magnitudes (which leaves a realistic sliver of floored zeros
// in RD).
inline SynthSpec demo_synth_spec() {
    struct Row {
        const char* name;
        double t1, t2;      // target standardized loadings
        bool count_like;
        double loc, scale;
    };
    const Row rows[] = {
        {"RD", 0.668, 0.213, true, 14.455, 9.228},
        {"ResPatent", 0.896, 0.149, true, 3.906, 3.189},
        {"AcadInst", 0.962, 0.089, true, 3.063, 1.586},
        {"NonAcadInst", 0.873, 0.269, true, 2.883, 1.634},
        {"Authors", 0.981, 0.153, true, 7.792, 2.478},
        {"Pubs", 0.978, 0.166, true, 6.736, 2.774},
        {"IntlPubs", 0.974, 0.195, true, 5.813, 2.373},
        {"OpenInternet", 0.044, 0.772, false, 0.387, 1.511},
        {"RuleLaw", 0.274, 0.917, false, 0.555, 0.303},
        {"RegQual", 0.472, 0.764, false, -0.118, 0.993},
        {"Stability", 0.119, 0.713, false, -0.205, 0.951},
        {"NonCorrupt", 0.398, 0.754, false, -0.115, 1.005},
        {"Polyarchy", 0.146, 0.911, false, 0.527, 0.25},
        {"AcadFreedom", 0.009, 0.814, false, 0.638, 0.289},
    };
    SynthSpec spec;
    spec.noise_sd = 0.35;
    spec.n_regions = 10;
    for (const auto& r : rows) {
        const double h2 = r.t1 * r.t1 + r.t2 * r.t2;
        const double amp = spec.noise_sd / std::sqrt(1.0 - h2);
        spec.variables.push_back(
            {r.name, amp * r.t1, amp * r.t2, r.count_like, r.loc, r.scale});
    }
    // outcome: modest positive dependence on both factors
    spec.variables.push_back({"FWCI", 0.10, 0.12, false, 0.79, 0.6});
    return spec;
}

inline nlohmann::json synth_spec_to_json(const SynthSpec& spec) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : spec.variables)
        vars.push_back({{"name", v.name},
                        {"loading_capacity", v.loading_capacity},
                        {"loading_governance", v.loading_governance},
                        {"count_like", v.count_like},
                        {"location", v.location},
                        {"scale", v.scale}});
    return {{"noise_sd", spec.noise_sd}, {"n_regions", spec.n_regions}, {"variables", vars}};
}

inline SynthSpec synth_spec_from_json(const nlohmann::json& j) {
    SynthSpec spec;
    spec.noise_sd = j.at("noise_sd").get<double>();
    spec.n_regions = j.at("n_regions").get<int>();
    for (const auto& item : j.at("variables")) {
        SynthVariable v;
        v.name = item.at("name").get<std::string>();
        v.loading_capacity = item.at("loading_capacity").get<double>();
        v.loading_governance = item.at("loading_governance").get<double>();
        v.count_like = item.value("count_like", false);
        v.location = item.value("location", 0.0);
        v.scale = item.value("scale", 1.0);
        spec.variables.push_back(std::move(v));
    }
    return spec;
}

inline SynthSpec load_synth_spec(const std::string& path) {
    try {
        return synth_spec_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw io_error("cannot parse synth spec " + path + ": " + e.what());
    }
}

inline Panel generate_synthetic_panel(std::uint64_t seed, int n_countries, int n_years,
                                      const SynthSpec& spec) {
    if (n_countries <= 0 || n_years <= 0)
        throw validation_error("synthetic panel dimensions must be positive");
    if (spec.variables.empty()) throw validation_error("synth spec has no variables");
    if (spec.n_regions <= 0) throw validation_error("synth spec needs at least one region");
    if (spec.noise_sd < 0.0) throw validation_error("synth noise sd must be nonnegative");

    Panel panel;
    panel.year_from = 2013;
    panel.year_to = 2013 + n_years - 1;
    for (const auto& v : spec.variables) panel.variables.push_back(v.name);

    int width = 3;
    for (int n = n_countries; n >= 1000; n /= 10) ++width;
    for (int i = 0; i < n_countries; ++i) {
        std::string num = std::to_string(i + 1);
        num.insert(0, static_cast<std::size_t>(width) - num.size(), '0');
        std::string region = std::to_string(i % spec.n_regions + 1);
        if (region.size() < 2) region.insert(0, "0");
        panel.countries.push_back({"C" + num, "Country " + num, "R" + region});
    }

    Rng rng(seed);
    // latent country factors first, then noise in (country, year, variable)
    // order; the draw order is part of the determinism contract
    std::vector<double> f1(n_countries), f2(n_countries);
    for (int i = 0; i < n_countries; ++i) {
        f1[i] = rng.normal();
        f2[i] = rng.normal();
    }

    panel.values.reserve(static_cast<std::size_t>(n_countries) * n_years *
                         spec.variables.size());
    for (int i = 0; i < n_countries; ++i)
        for (int t = 0; t < n_years; ++t)
            for (const auto& v : spec.variables) {
                double y = v.loading_capacity * f1[i] + v.loading_governance * f2[i];
                if (spec.noise_sd > 0.0) y += spec.noise_sd * rng.normal();
                double cell = v.location + v.scale * y;
                if (v.count_like) cell = std::max(0.0, std::expm1(cell));
                panel.values.push_back(cell);
            }
    return panel;
}

inline std::string panel_to_csv(const Panel& panel) {
    std::string out = "country_code,country_name,region,year";
    for (const auto& v : panel.variables) out += "," + csv_escape(v);
    out += "\n";
    for (std::size_t c = 0; c < panel.countries.size(); ++c)
        for (int y = panel.year_from; y <= panel.year_to; ++y) {
            out += csv_escape(panel.countries[c].code) + "," +
                   csv_escape(panel.countries[c].name) + "," +
                   csv_escape(panel.countries[c].region) + "," + std::to_string(y);
            for (std::size_t v = 0; v < panel.variables.size(); ++v) {
                out += ",";
                if (!panel.missing(c, y, v)) out += fmt17(panel.value(c, y, v));
            }
            out += "\n";
        }
    return out;
}

}  // namespace rcindex
