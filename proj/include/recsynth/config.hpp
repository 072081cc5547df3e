#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "recsynth/catalog.hpp"
#include "recsynth/copula.hpp"
#include "recsynth/fuzzy.hpp"
#include "recsynth/mnl.hpp"
#include "recsynth/nominal.hpp"
#include "recsynth/ratings.hpp"
#include "recsynth/stats.hpp"
#include "recsynth/toml.hpp"

namespace recsynth {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct FuzzyConfig {
    std::vector<LinguisticVariable> inputs;
    LinguisticVariable output;
    RuleBase rules;
    bool cache = false;
    double cache_step = 0.001;
};

struct OutputOptions {
    bool emit_affinity = false;
};

/// Complete declarative description of one dataset.
struct GenerationSpec {
    std::uint64_t seed = 0;
    std::size_t n_users = 0;

    std::vector<OrdinalFeatureSpec> ordinal_features;
    CorrelationMatrix correlation;

    std::vector<NominalFeatureSpec> nominal_features;
    ThetaMode theta_mode = ThetaMode::per_user;

    std::vector<std::string> preference_categories;
    BetaMatrix beta;
    std::size_t ref_preference = 0;
    double tau = 1.0;

    ItemCatalog catalog;
    double noise_density = 0.0;
    double ratings_density = 1.0;

    FuzzyConfig fuzzy;
    OutputOptions output;
};

/// The shipped tourism case study: four correlated ordinal demographics,
/// four nominal features (job conditioned on education), ten preference
/// categories, a 23-item catalog and the default rating rule base.
inline GenerationSpec default_spec() {
    GenerationSpec spec;
    spec.seed = 42;
    spec.n_users = 100000;

    spec.ordinal_features = {
        {"Age",
         {"18-30", "31-40", "41-50", "51-60", "60+"},
         {-1.1, -0.5, 0.4, 0.9},
         false,
         {{18, 30}, {31, 40}, {41, 50}, {51, 60}, {61, 80}}},
        {"AcDeg", {"None", "High School", "Some College", "College Degree"}, {-1.8, -1.0, 0.5},
         false, {}},
        {"Budget", {"Low", "Mid", "High"}, {-0.5, 1.2}, false, {}},
        {"Accom", {"Single", "Double", "Suite", "Villa"}, {-1.0, 1.0, 1.7}, false, {}},
    };

    Matrix corr(4, 4);
    const double rows[4][4] = {{1.0, 0.4, 0.5, 0.5},
                               {0.4, 1.0, 0.6, 0.4},
                               {0.5, 0.6, 1.0, 0.9},
                               {0.5, 0.4, 0.9, 1.0}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) corr(i, j) = rows[i][j];
    spec.correlation = CorrelationMatrix(std::move(corr));

    NominalFeatureSpec gender{"Gender", {"Female", "Male"}, {10, 10}, "", {}};
    NominalFeatureSpec job{"Job", {"Blue Collar", "White Collar"}, {}, "AcDeg",
                           {{"None", {90, 10}},
                            {"High School", {70, 30}},
                            {"Some College", {40, 60}},
                            {"College Degree", {10, 90}}}};
    NominalFeatureSpec region{"Region",
                              {"Africa", "Asia", "East Europe", "Middle East", "North America",
                               "North Europe", "South America", "South Europe"},
                              {20, 20, 10, 10, 10, 50, 10, 50},
                              "",
                              {}};
    NominalFeatureSpec group{"GroupComp",
                             {"1 Adult", "2 Adults", "2 Adults + Child", "Group of Friends"},
                             {20, 50, 50, 10},
                             "",
                             {}};
    spec.nominal_features = {gender, job, region, group};

    spec.preference_categories = {"Beach", "Relax", "Shop",    "Nightlife", "Theme park",
                                  "Gastro", "Sports", "Culture", "Nature",    "Events"};

    const double beta_rows[20][10] = {
        {2, 5, 3, 1, 2, 4, 1, 4, 3, 3},  // Age
        {3, 4, 3, 3, 3, 3, 3, 4, 3, 3},  // AcDeg
        {3, 3, 5, 3, 3, 4, 3, 3, 3, 3},  // Budget
        {3, 3, 3, 3, 3, 3, 3, 3, 3, 3},  // Accom
        {3, 3, 4, 3, 3, 3, 3, 3, 3, 3},  // Female
        {3, 3, 3, 3, 3, 3, 4, 3, 3, 3},  // Male
        {3, 3, 3, 4, 4, 1, 4, 2, 3, 3},  // Blue Collar
        {3, 3, 4, 3, 3, 5, 3, 5, 3, 3},  // White Collar
        {3, 3, 5, 4, 3, 3, 3, 3, 3, 4},  // Africa
        {2, 3, 4, 2, 4, 3, 2, 4, 3, 3},  // Asia
        {3, 3, 4, 4, 3, 3, 4, 3, 3, 3},  // East Europe
        {1, 3, 5, 2, 3, 4, 3, 3, 2, 3},  // Middle East
        {4, 3, 3, 3, 4, 3, 4, 3, 4, 3},  // North America
        {4, 3, 3, 4, 3, 4, 5, 4, 5, 3},  // North Europe
        {5, 3, 3, 4, 4, 3, 4, 3, 3, 3},  // South America
        {5, 3, 2, 4, 3, 5, 4, 4, 3, 3},  // South Europe
        {3, 3, 3, 4, 1, 4, 4, 3, 3, 3},  // 1 Adult
        {4, 4, 4, 4, 2, 3, 3, 3, 3, 3},  // 2 Adults
        {4, 5, 3, 1, 4, 3, 3, 3, 3, 3},  // 2 Adults + Child
        {3, 3, 4, 5, 4, 4, 3, 3, 4, 4},  // Group of Friends
    };
    std::vector<std::string> ordinal_names;
    std::vector<std::vector<std::string>> nominal_cats;
    for (const auto& f : spec.ordinal_features) ordinal_names.push_back(f.name);
    for (const auto& f : spec.nominal_features) nominal_cats.push_back(f.categories);
    spec.beta.row_names = design_column_names(ordinal_names, nominal_cats);
    spec.beta.preference_names = spec.preference_categories;
    spec.beta.values = Matrix(20, 10);
    for (std::size_t r = 0; r < 20; ++r)
        for (std::size_t c = 0; c < 10; ++c) spec.beta.values(r, c) = beta_rows[r][c];
    spec.ref_preference = 0;
    spec.tau = 0.25;

    spec.catalog.items = {
        {0, "Restaurant Fake", {"Gastro"}},
        {1, "Fiction Nightclub", {"Nightlife"}},
        {2, "Random Shopping Mall", {"Shop", "Relax"}},
        {3, "Bogus Waterpark", {"Theme park"}},
        {4, "Unknown Nature Route", {"Nature", "Relax"}},
        {5, "Some Sport Event", {"Sports", "Events"}},
        {6, "Never Happened Festival", {"Events", "Culture"}},
        {7, "False Tavern", {"Gastro", "Culture"}},
        {8, "Make-believe Pub", {"Gastro", "Nightlife"}},
        {9, "Another Sport Event", {"Sports", "Events"}},
        {10, "Surprise Concert", {"Events", "Culture"}},
        {11, "Museum of Fake History", {"Culture"}},
        {12, "Fake BTT Route", {"Sports", "Nature"}},
        {13, "Random Surfing Lessons", {"Sports", "Nature"}},
        {14, "Fake Brands Boutique", {"Shop"}},
        {15, "Best Imaginary Restaurant", {"Gastro"}},
        {16, "Bogus Spa", {"Relax"}},
        {17, "Random Cultural Tour", {"Culture"}},
        {18, "Non existing Zipline", {"Sports"}},
        {19, "Fake Klub", {"Nightlife"}},
        {20, "Random Golf Lessons", {"Sports"}},
        {21, "Secret Beach", {"Beach"}},
        {22, "Fake Beach", {"Beach"}},
    };

    spec.noise_density = 0.01;
    spec.ratings_density = 0.15;

    spec.fuzzy.inputs = default_rating_inputs();
    spec.fuzzy.output = default_rating_output();
    spec.fuzzy.rules = default_rating_rules();
    spec.fuzzy.cache = false;

    return spec;
}

namespace detail {

inline void check_unique_names(const GenerationSpec& spec) {
    std::set<std::string> seen;
    for (const auto& f : spec.ordinal_features)
        if (!seen.insert(f.name).second)
            throw ConfigError("duplicate feature name '" + f.name + "'");
    for (const auto& f : spec.nominal_features)
        if (!seen.insert(f.name).second)
            throw ConfigError("duplicate feature name '" + f.name + "'");
}

inline const OrdinalFeatureSpec* find_ordinal(const GenerationSpec& spec, const std::string& name) {
    for (const auto& f : spec.ordinal_features)
        if (f.name == name) return &f;
    return nullptr;
}

}  // namespace detail

/// Checks every cross-field invariant of the spec; throws ConfigError
/// naming the offending field.
inline void validate_spec(const GenerationSpec& spec) {
    if (spec.n_users < 1) throw ConfigError("n_users: must be >= 1");
    if (spec.ordinal_features.empty()) throw ConfigError("ordinal.features: must not be empty");
    for (const auto& f : spec.ordinal_features) {
        try {
            f.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("ordinal.features: ") + e.what());
        }
    }
    detail::check_unique_names(spec);

    if (spec.correlation.dim != spec.ordinal_features.size())
        throw ConfigError("ordinal.correlation: dimension " + std::to_string(spec.correlation.dim) +
                          " does not match the " + std::to_string(spec.ordinal_features.size()) +
                          " ordinal features");
    try {
        cholesky_lower(spec.correlation);  // symmetry, range and positive definiteness
    } catch (const std::exception& e) {
        throw ConfigError(std::string("ordinal.correlation: ") + e.what());
    }

    // Conditioning may only reach ordinal features or nominal features
    // declared earlier, which keeps the dependency graph acyclic.
    std::set<std::string> generated;
    for (const auto& f : spec.ordinal_features) generated.insert(f.name);
    for (const auto& f : spec.nominal_features) {
        try {
            f.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("nominal.features: ") + e.what());
        }
        if (f.conditional()) {
            if (!generated.contains(f.conditioned_on))
                throw ConfigError("nominal feature '" + f.name + "': conditioned_on '" +
                                  f.conditioned_on +
                                  "' must name an ordinal feature or an earlier nominal feature");
            const std::vector<std::string>* values = nullptr;
            if (const auto* ord = detail::find_ordinal(spec, f.conditioned_on)) {
                values = &ord->labels;
            } else {
                for (const auto& g : spec.nominal_features)
                    if (g.name == f.conditioned_on) values = &g.categories;
            }
            for (const auto& v : *values)
                if (!f.alpha_by.contains(v))
                    throw ConfigError("nominal feature '" + f.name + "': no prior row for '" +
                                      f.conditioned_on + "' = '" + v + "'");
        }
        generated.insert(f.name);
    }

    if (spec.preference_categories.size() < 2)
        throw ConfigError("preferences.categories: need at least 2");
    {
        std::set<std::string> seen(spec.preference_categories.begin(),
                                   spec.preference_categories.end());
        if (seen.size() != spec.preference_categories.size())
            throw ConfigError("preferences.categories: duplicate category");
    }
    if (spec.ref_preference >= spec.preference_categories.size())
        throw ConfigError("preferences.reference: unknown preference category");
    if (!(spec.tau >= 0.0)) throw ConfigError("preferences.tau: must be >= 0");

    std::vector<std::string> ordinal_names;
    std::vector<std::vector<std::string>> nominal_cats;
    for (const auto& f : spec.ordinal_features) ordinal_names.push_back(f.name);
    for (const auto& f : spec.nominal_features) nominal_cats.push_back(f.categories);
    const std::vector<std::string> design = design_column_names(ordinal_names, nominal_cats);
    if (spec.beta.row_names != design) {
        for (const auto& col : design) {
            if (std::find(spec.beta.row_names.begin(), spec.beta.row_names.end(), col) ==
                spec.beta.row_names.end())
                throw ConfigError("preferences.beta: missing row for design column '" + col + "'");
        }
        for (const auto& row : spec.beta.row_names) {
            if (std::find(design.begin(), design.end(), row) == design.end())
                throw ConfigError("preferences.beta: row '" + row +
                                  "' does not match any design column");
        }
        throw ConfigError("preferences.beta: rows must appear in design-column order");
    }
    if (spec.beta.preference_names != spec.preference_categories)
        throw ConfigError("preferences.beta: columns must match preferences.categories");
    try {
        spec.beta.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("preferences.beta: ") + e.what());
    }

    try {
        spec.catalog.validate();
        vectorize_catalog(spec.catalog, spec.preference_categories);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("catalog: ") + e.what());
    }

    if (!(spec.noise_density >= 0.0 && spec.noise_density <= 1.0))
        throw ConfigError("noise.density: must lie in [0, 1]");
    if (!(spec.ratings_density > 0.0 && spec.ratings_density <= 1.0))
        throw ConfigError("ratings.density: must lie in (0, 1]");

    try {
        MamdaniFis fis(spec.fuzzy.inputs, spec.fuzzy.output, spec.fuzzy.rules);
        RuleCoverageReport coverage = validate_rulebase(spec.fuzzy.rules, spec.fuzzy.inputs);
        if (!coverage.complete()) {
            std::string detail = coverage.duplicated.empty()
                                     ? std::to_string(coverage.missing.size()) + " combinations uncovered"
                                     : std::to_string(coverage.duplicated.size()) + " combinations duplicated";
            throw std::runtime_error("rule base incomplete: " + detail);
        }
    } catch (const std::exception& e) {
        throw ConfigError(std::string("fuzzy: ") + e.what());
    }
    if (!(spec.fuzzy.cache_step > 0.0)) throw ConfigError("fuzzy.cache_step: must be positive");
}

namespace detail {

inline double require_double(const toml::Value& table, const std::string& key,
                             const std::string& where) {
    const toml::Value* v = table.find(key);
    if (!v) throw ConfigError(where + ": missing key '" + key + "'");
    try {
        return v->as_double();
    } catch (const std::exception&) {
        throw ConfigError(where + "." + key + ": expected a number");
    }
}

inline std::string require_string(const toml::Value& table, const std::string& key,
                                  const std::string& where) {
    const toml::Value* v = table.find(key);
    if (!v) throw ConfigError(where + ": missing key '" + key + "'");
    try {
        return v->as_string();
    } catch (const std::exception&) {
        throw ConfigError(where + "." + key + ": expected a string");
    }
}

inline MembershipFunction parse_term_shape(const toml::Value& tuple, const std::string& where) {
    if (!tuple.is_array() || tuple.size() < 2)
        throw ConfigError(where + ": term must be [label, kind, params...]");
    const std::string kind = tuple[1].as_string();
    if (kind == "tri") {
        if (tuple.size() != 5) throw ConfigError(where + ": tri needs 3 parameters");
        return MembershipFunction::triangle(tuple[2].as_double(), tuple[3].as_double(),
                                            tuple[4].as_double());
    }
    if (kind == "trap") {
        if (tuple.size() != 6) throw ConfigError(where + ": trap needs 4 parameters");
        return MembershipFunction::trapezoid(tuple[2].as_double(), tuple[3].as_double(),
                                             tuple[4].as_double(), tuple[5].as_double());
    }
    throw ConfigError(where + ": unknown membership kind '" + kind + "' (use tri or trap)");
}

inline LinguisticVariable parse_variable(const toml::Value& entry, const std::string& where) {
    LinguisticVariable var;
    var.name = require_string(entry, "name", where);
    const toml::Value* universe = entry.find("universe");
    if (!universe || !universe->is_array() || universe->size() != 2)
        throw ConfigError(where + " '" + var.name + "': universe must be [lo, hi]");
    var.lo = (*universe)[0].as_double();
    var.hi = (*universe)[1].as_double();
    if (const toml::Value* res = entry.find("resolution")) var.resolution = res->as_double();
    const toml::Value* terms = entry.find("terms");
    if (!terms || !terms->is_array())
        throw ConfigError(where + " '" + var.name + "': missing terms array");
    for (std::size_t t = 0; t < terms->size(); ++t) {
        const toml::Value& tuple = (*terms)[t];
        std::string label = tuple.is_array() && tuple.size() > 0 && tuple[0].is_string()
                                ? tuple[0].as_string()
                                : "";
        if (label.empty())
            throw ConfigError(where + " '" + var.name + "': term " + std::to_string(t) +
                              " needs a label");
        var.terms.emplace_back(label, parse_term_shape(tuple, where + " '" + var.name + "'"));
    }
    return var;
}

inline FuzzyConfig parse_fuzzy(const toml::Value& root) {
    FuzzyConfig fz;
    fz.inputs = default_rating_inputs();
    fz.output = default_rating_output();
    fz.rules = default_rating_rules();

    const toml::Value* fuzzy = root.find("fuzzy");
    if (!fuzzy) return fz;
    if (const toml::Value* cache = fuzzy->find("cache")) fz.cache = cache->as_bool();
    if (const toml::Value* step = fuzzy->find("cache_step")) fz.cache_step = step->as_double();
    if (const toml::Value* res = fuzzy->find("resolution")) fz.output.resolution = res->as_double();

    const toml::Value* variables = fuzzy->find("variables");
    if (variables && variables->is_array()) {
        std::vector<LinguisticVariable> declared;
        for (std::size_t i = 0; i < variables->size(); ++i)
            declared.push_back(parse_variable((*variables)[i], "fuzzy.variables"));
        const std::string output_name =
            fuzzy->contains("output") ? fuzzy->at("output").as_string() : "rating";
        std::vector<std::string> input_names;
        if (const toml::Value* inputs = fuzzy->find("inputs")) {
            input_names = inputs->as_string_array();
        } else {
            for (const auto& v : declared)
                if (v.name != output_name) input_names.push_back(v.name);
        }
        fz.inputs.clear();
        bool have_output = false;
        for (const auto& name : input_names) {
            auto it = std::find_if(declared.begin(), declared.end(),
                                   [&](const auto& v) { return v.name == name; });
            if (it == declared.end())
                throw ConfigError("fuzzy.inputs: variable '" + name + "' is not declared");
            fz.inputs.push_back(*it);
        }
        for (const auto& v : declared)
            if (v.name == output_name) {
                fz.output = v;
                have_output = true;
            }
        if (!have_output)
            throw ConfigError("fuzzy: output variable '" + output_name + "' is not declared");
    } else if (variables && variables->is_string()) {
        if (variables->as_string() != "default")
            throw ConfigError("fuzzy.variables: expected \"default\" or an array of variables");
    }

    const toml::Value* rules = fuzzy->find("rules");
    if (rules && rules->is_array()) {
        fz.rules.rules.clear();
        for (std::size_t r = 0; r < rules->size(); ++r) {
            const toml::Value& tuple = (*rules)[r];
            if (!tuple.is_array() || tuple.size() != fz.inputs.size() + 1)
                throw ConfigError("fuzzy.rules[" + std::to_string(r) + "]: expected " +
                                  std::to_string(fz.inputs.size() + 1) + " labels");
            FuzzyRule rule;
            for (std::size_t v = 0; v < fz.inputs.size(); ++v)
                rule.antecedent.emplace_back(fz.inputs[v].name, tuple[v].as_string());
            rule.consequent = {fz.output.name, tuple[fz.inputs.size()].as_string()};
            fz.rules.rules.push_back(std::move(rule));
        }
    } else if (rules && rules->is_string()) {
        if (rules->as_string() != "default")
            throw ConfigError("fuzzy.rules: expected \"default\" or an array of rule tuples");
    }
    return fz;
}

}  // namespace detail

/// Parses a TOML config into a GenerationSpec and validates every
/// invariant. Sections absent from the file fall back to the shipped
/// tourism defaults only for the fuzzy block; everything else is required.
inline GenerationSpec load_config(const toml::Value& root) {
    GenerationSpec spec;
    spec.seed = static_cast<std::uint64_t>(detail::require_double(root, "seed", "config"));
    double n_users = detail::require_double(root, "n_users", "config");
    if (n_users < 1) throw ConfigError("n_users: must be >= 1");
    spec.n_users = static_cast<std::size_t>(n_users);

    const toml::Value* ordinal = root.find("ordinal");
    if (!ordinal) throw ConfigError("config: missing [ordinal] section");
    const toml::Value* corr = ordinal->find("correlation");
    if (!corr || !corr->is_array()) throw ConfigError("ordinal.correlation: missing matrix");
    {
        std::size_t d = corr->size();
        Matrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            const toml::Value& row = (*corr)[i];
            if (!row.is_array() || row.size() != d)
                throw ConfigError("ordinal.correlation: row " + std::to_string(i) +
                                  " must have " + std::to_string(d) + " entries");
            for (std::size_t j = 0; j < d; ++j) m(i, j) = row[j].as_double();
        }
        spec.correlation = CorrelationMatrix(std::move(m));
    }
    const toml::Value* ord_features = ordinal->find("features");
    if (!ord_features || !ord_features->is_array())
        throw ConfigError("ordinal.features: missing array of feature tables");
    for (std::size_t i = 0; i < ord_features->size(); ++i) {
        const toml::Value& f = (*ord_features)[i];
        OrdinalFeatureSpec o;
        o.name = detail::require_string(f, "name", "ordinal.features");
        const toml::Value* labels = f.find("labels");
        if (!labels || !labels->is_array())
            throw ConfigError("ordinal feature '" + o.name + "': missing labels");
        o.labels = labels->as_string_array();
        const toml::Value* cutoffs = f.find("cutoffs");
        if (!cutoffs || !cutoffs->is_array())
            throw ConfigError("ordinal feature '" + o.name + "': missing cutoffs");
        o.cutoffs = cutoffs->as_double_array();
        if (const toml::Value* proxy = f.find("continuous_proxy")) o.continuous_proxy = proxy->as_bool();
        if (const toml::Value* ranges = f.find("bin_ranges")) {
            for (std::size_t r = 0; r < ranges->size(); ++r) {
                const toml::Value& pair = (*ranges)[r];
                if (!pair.is_array() || pair.size() != 2)
                    throw ConfigError("ordinal feature '" + o.name + "': bin_ranges entries must be [lo, hi]");
                o.bin_ranges.emplace_back(pair[0].as_double(), pair[1].as_double());
            }
        }
        spec.ordinal_features.push_back(std::move(o));
    }

    if (const toml::Value* nominal = root.find("nominal")) {
        if (const toml::Value* mode = nominal->find("theta_mode")) {
            const std::string m = mode->as_string();
            if (m == "per_user")
                spec.theta_mode = ThetaMode::per_user;
            else if (m == "per_run")
                spec.theta_mode = ThetaMode::per_run;
            else
                throw ConfigError("nominal.theta_mode: expected per_user or per_run");
        }
        if (const toml::Value* features = nominal->find("features")) {
            for (std::size_t i = 0; i < features->size(); ++i) {
                const toml::Value& f = (*features)[i];
                NominalFeatureSpec n;
                n.name = detail::require_string(f, "name", "nominal.features");
                const toml::Value* cats = f.find("categories");
                if (!cats || !cats->is_array())
                    throw ConfigError("nominal feature '" + n.name + "': missing categories");
                n.categories = cats->as_string_array();
                if (const toml::Value* cond = f.find("conditioned_on"))
                    n.conditioned_on = cond->as_string();
                if (n.conditional()) {
                    const toml::Value* rows = f.find("alpha_by");
                    if (!rows || !rows->is_table())
                        throw ConfigError("nominal feature '" + n.name +
                                          "': conditional prior needs an alpha_by table");
                    for (const auto& [label, alphas] : rows->entries())
                        n.alpha_by.emplace(label, alphas->as_double_array());
                } else {
                    const toml::Value* alpha = f.find("alpha");
                    if (!alpha || !alpha->is_array())
                        throw ConfigError("nominal feature '" + n.name + "': missing alpha");
                    n.alpha = alpha->as_double_array();
                }
                spec.nominal_features.push_back(std::move(n));
            }
        }
    }

    const toml::Value* prefs = root.find("preferences");
    if (!prefs) throw ConfigError("config: missing [preferences] section");
    {
        const toml::Value* cats = prefs->find("categories");
        if (!cats || !cats->is_array()) throw ConfigError("preferences.categories: missing");
        spec.preference_categories = cats->as_string_array();
        if (const toml::Value* tau = prefs->find("tau")) spec.tau = tau->as_double();
        if (const toml::Value* ref = prefs->find("reference")) {
            const std::string name = ref->as_string();
            auto it = std::find(spec.preference_categories.begin(),
                                spec.preference_categories.end(), name);
            if (it == spec.preference_categories.end())
                throw ConfigError("preferences.reference: unknown category '" + name + "'");
            spec.ref_preference =
                static_cast<std::size_t>(it - spec.preference_categories.begin());
        }

        const toml::Value* beta = prefs->find("beta");
        if (!beta || !beta->is_table()) throw ConfigError("preferences.beta: missing table");
        std::vector<std::string> ordinal_names;
        std::vector<std::vector<std::string>> nominal_cats;
        for (const auto& f : spec.ordinal_features) ordinal_names.push_back(f.name);
        for (const auto& f : spec.nominal_features) nominal_cats.push_back(f.categories);
        spec.beta.row_names = design_column_names(ordinal_names, nominal_cats);
        spec.beta.preference_names = spec.preference_categories;
        spec.beta.values = Matrix(spec.beta.row_names.size(), spec.preference_categories.size());
        for (std::size_t r = 0; r < spec.beta.row_names.size(); ++r) {
            const toml::Value* row = beta->find(spec.beta.row_names[r]);
            if (!row)
                throw ConfigError("preferences.beta: missing row for design column '" +
                                  spec.beta.row_names[r] + "'");
            std::vector<double> grades = row->as_double_array();
            if (grades.size() != spec.preference_categories.size())
                throw ConfigError("preferences.beta: row '" + spec.beta.row_names[r] + "' has " +
                                  std::to_string(grades.size()) + " grades, expected " +
                                  std::to_string(spec.preference_categories.size()));
            for (std::size_t c = 0; c < grades.size(); ++c) spec.beta.values(r, c) = grades[c];
        }
        for (const auto& [key, value] : beta->entries()) {
            if (std::find(spec.beta.row_names.begin(), spec.beta.row_names.end(), key) ==
                spec.beta.row_names.end())
                throw ConfigError("preferences.beta: row '" + key +
                                  "' does not match any design column");
        }
    }

    const toml::Value* catalog = root.find("catalog");
    if (!catalog) throw ConfigError("config: missing [catalog] section");
    {
        const toml::Value* items = catalog->find("items");
        if (!items || !items->is_array()) throw ConfigError("catalog.items: missing array");
        for (std::size_t i = 0; i < items->size(); ++i) {
            const toml::Value& it = (*items)[i];
            CatalogItem item;
            item.id = static_cast<int>(detail::require_double(it, "id", "catalog.items"));
            item.name = detail::require_string(it, "name", "catalog.items");
            const toml::Value* cats = it.find("categories");
            if (!cats || !cats->is_array())
                throw ConfigError("catalog item '" + item.name + "': missing categories");
            item.categories = cats->as_string_array();
            spec.catalog.items.push_back(std::move(item));
        }
    }

    if (const toml::Value* noise = root.find("noise")) {
        spec.noise_density = detail::require_double(*noise, "density", "noise");
    }
    const toml::Value* ratings = root.find("ratings");
    if (!ratings) throw ConfigError("config: missing [ratings] section");
    spec.ratings_density = detail::require_double(*ratings, "density", "ratings");

    spec.fuzzy = detail::parse_fuzzy(root);

    if (const toml::Value* output = root.find("output")) {
        if (const toml::Value* aff = output->find("emit_affinity"))
            spec.output.emit_affinity = aff->as_bool();
    }

    validate_spec(spec);
    return spec;
}

inline GenerationSpec load_and_validate_config(const std::string& path) {
    return load_config(toml::parse_file(path));
}

}  // namespace recsynth
