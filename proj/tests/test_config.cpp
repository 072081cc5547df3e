#include "recsynth/config.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace recsynth;

namespace {

const std::string kShippedConfig = std::string(RECSYNTH_REPO_DIR) + "/configs/tourism.toml";

}  // namespace

TEST(DefaultSpec, PassesValidation) {
    GenerationSpec spec = default_spec();
    EXPECT_NO_THROW(validate_spec(spec));
    EXPECT_EQ(spec.preference_categories.size(), 10u);
    EXPECT_EQ(spec.catalog.size(), 23u);
    EXPECT_EQ(spec.beta.row_names.size(), 20u);
    EXPECT_EQ(spec.fuzzy.rules.rules.size(), 96u);
}

TEST(ShippedConfig, LoadsAndMatchesBuiltInDefaults) {
    GenerationSpec file = load_and_validate_config(kShippedConfig);
    GenerationSpec code = default_spec();

    EXPECT_EQ(file.seed, code.seed);
    EXPECT_EQ(file.n_users, code.n_users);
    EXPECT_EQ(file.preference_categories, code.preference_categories);
    EXPECT_EQ(file.ref_preference, code.ref_preference);
    EXPECT_DOUBLE_EQ(file.tau, code.tau);
    EXPECT_DOUBLE_EQ(file.noise_density, code.noise_density);
    EXPECT_DOUBLE_EQ(file.ratings_density, code.ratings_density);

    ASSERT_EQ(file.ordinal_features.size(), code.ordinal_features.size());
    for (std::size_t f = 0; f < file.ordinal_features.size(); ++f) {
        EXPECT_EQ(file.ordinal_features[f].name, code.ordinal_features[f].name);
        EXPECT_EQ(file.ordinal_features[f].labels, code.ordinal_features[f].labels);
        EXPECT_EQ(file.ordinal_features[f].cutoffs, code.ordinal_features[f].cutoffs);
    }
    EXPECT_EQ(file.correlation.entries, code.correlation.entries);

    ASSERT_EQ(file.nominal_features.size(), code.nominal_features.size());
    for (std::size_t f = 0; f < file.nominal_features.size(); ++f) {
        EXPECT_EQ(file.nominal_features[f].name, code.nominal_features[f].name);
        EXPECT_EQ(file.nominal_features[f].categories, code.nominal_features[f].categories);
        EXPECT_EQ(file.nominal_features[f].alpha, code.nominal_features[f].alpha);
        EXPECT_EQ(file.nominal_features[f].conditioned_on, code.nominal_features[f].conditioned_on);
        EXPECT_EQ(file.nominal_features[f].alpha_by, code.nominal_features[f].alpha_by);
    }

    EXPECT_EQ(file.beta.row_names, code.beta.row_names);
    EXPECT_EQ(file.beta.values, code.beta.values);

    ASSERT_EQ(file.catalog.size(), code.catalog.size());
    for (std::size_t i = 0; i < file.catalog.size(); ++i) {
        EXPECT_EQ(file.catalog.items[i].name, code.catalog.items[i].name);
        EXPECT_EQ(file.catalog.items[i].categories, code.catalog.items[i].categories);
    }

    EXPECT_EQ(file.fuzzy.rules.rules.size(), 96u);
    EXPECT_FALSE(file.fuzzy.cache);
}

TEST(ConfigValidation, RejectsNonPositiveDefiniteCorrelation) {
    GenerationSpec spec = default_spec();
    spec.correlation.entries(0, 1) = 0.999;
    spec.correlation.entries(1, 0) = 0.999;
    spec.correlation.entries(0, 2) = -0.999;
    spec.correlation.entries(2, 0) = -0.999;
    try {
        validate_spec(spec);
        FAIL() << "expected rejection";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("correlation"), std::string::npos) << e.what();
    }
}

TEST(ConfigValidation, RejectsCorrelationDimensionMismatch) {
    GenerationSpec spec = default_spec();
    spec.correlation = CorrelationMatrix::identity(3);
    EXPECT_THROW(validate_spec(spec), ConfigError);
}

TEST(ConfigValidation, RejectsBetaRowMismatchNamingColumn) {
    GenerationSpec spec = default_spec();
    spec.beta.row_names[4] = "x0_Unknown";
    try {
        validate_spec(spec);
        FAIL() << "expected rejection";
    } catch (const ConfigError& e) {
        std::string what = e.what();
        EXPECT_NE(what.find("x0_Female"), std::string::npos) << what;
    }
}

TEST(ConfigValidation, RejectsForwardConditioning) {
    GenerationSpec spec = default_spec();
    // Gender (declared first) cannot condition on Region (declared later)
    spec.nominal_features[0].alpha.clear();
    spec.nominal_features[0].conditioned_on = "Region";
    for (const auto& cat : spec.nominal_features[2].categories)
        spec.nominal_features[0].alpha_by[cat] = {1.0, 1.0};
    try {
        validate_spec(spec);
        FAIL() << "expected rejection";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("Gender"), std::string::npos) << e.what();
    }
}

TEST(ConfigValidation, RejectsIncompletePriorTable) {
    GenerationSpec spec = default_spec();
    spec.nominal_features[1].alpha_by.erase("High School");
    try {
        validate_spec(spec);
        FAIL() << "expected rejection";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("High School"), std::string::npos) << e.what();
    }
}

TEST(ConfigValidation, RejectsCatalogWithUnknownCategory) {
    GenerationSpec spec = default_spec();
    spec.catalog.items[3].categories = {"Volcano"};
    try {
        validate_spec(spec);
        FAIL() << "expected rejection";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("Volcano"), std::string::npos) << e.what();
    }
}

TEST(ConfigValidation, RejectsBadDensities) {
    GenerationSpec spec = default_spec();
    spec.ratings_density = 0.0;
    EXPECT_THROW(validate_spec(spec), ConfigError);
    spec = default_spec();
    spec.noise_density = 1.0001;
    EXPECT_THROW(validate_spec(spec), ConfigError);
}

TEST(ConfigValidation, RejectsIncompleteRuleBase) {
    GenerationSpec spec = default_spec();
    spec.fuzzy.rules.rules.resize(95);
    EXPECT_THROW(validate_spec(spec), ConfigError);
    spec = default_spec();
    spec.fuzzy.rules.rules.push_back(spec.fuzzy.rules.rules.front());
    EXPECT_THROW(validate_spec(spec), ConfigError);
}

TEST(ConfigLoading, ExplicitFuzzySection) {
    // 1 input x 2 labels, 2 rules: a complete custom FIS
    const std::string text = R"(
seed = 1
n_users = 10

[ordinal]
correlation = [[1.0]]

[[ordinal.features]]
name = "F"
labels = ["lo", "hi"]
cutoffs = [0.0]

[preferences]
categories = ["A", "B"]
tau = 1.0

[preferences.beta]
F = [1, 2]

[[catalog.items]]
id = 0
name = "thing"
categories = ["A"]

[ratings]
density = 0.5

[fuzzy]
inputs = ["preference"]
output = "rating"
rules = [["lo", "vlow"], ["hi", "vhigh"]]

[[fuzzy.variables]]
name = "preference"
universe = [0.0, 1.0]
terms = [
  ["lo", "tri", 0.0, 0.0, 1.0],
  ["hi", "tri", 0.0, 1.0, 1.0],
]

[[fuzzy.variables]]
name = "rating"
universe = [1.0, 5.0]
resolution = 0.01
terms = [
  ["vlow", "trap", 1.0, 1.0, 2.0, 3.2],
  ["vhigh", "trap", 2.8, 4.0, 5.0, 5.0],
]
)";
    GenerationSpec spec = load_config(toml::parse(text));
    EXPECT_EQ(spec.fuzzy.inputs.size(), 1u);
    EXPECT_EQ(spec.fuzzy.inputs[0].name, "preference");
    EXPECT_EQ(spec.fuzzy.output.terms.size(), 2u);
    EXPECT_EQ(spec.fuzzy.rules.rules.size(), 2u);
    EXPECT_EQ(spec.fuzzy.rules.rules[1].consequent.second, "vhigh");
}

TEST(ConfigLoading, MissingBetaRowNamesColumn) {
    const std::string text = R"(
seed = 1
n_users = 10

[ordinal]
correlation = [[1.0]]

[[ordinal.features]]
name = "F"
labels = ["lo", "hi"]
cutoffs = [0.0]

[[nominal.features]]
name = "G"
categories = ["a", "b"]
alpha = [1, 1]

[preferences]
categories = ["A", "B"]

[preferences.beta]
F = [1, 2]
"x0_a" = [1, 2]

[[catalog.items]]
id = 0
name = "thing"
categories = ["A"]

[ratings]
density = 0.5
)";
    try {
        load_config(toml::parse(text));
        FAIL() << "expected rejection";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("x0_b"), std::string::npos) << e.what();
    }
}
