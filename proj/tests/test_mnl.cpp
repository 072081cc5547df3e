#include "recsynth/mnl.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "recsynth/config.hpp"

using namespace recsynth;

namespace {

// Two ordinal features and two small nominal blocks; enough structure to
// exercise the encoding rules without a whole pipeline.
UserTable small_users() {
    UserTable users;
    users.n_users = 3;
    OrdinalFeatureSpec age{"Age", {"a1", "a2", "a3", "a4", "a5"}, {-1.1, -0.5, 0.4, 0.9},
                           false, {}};
    OrdinalFeatureSpec budget{"Budget", {"Low", "Mid", "High"}, {-0.5, 1.2}, false, {}};
    users.add_ordinal(age, {4, 1, 3});
    users.add_ordinal(budget, {1, 2, 3});
    users.add_nominal("Gender", {"Female", "Male"}, {0, 1, 0});
    users.add_nominal("Job", {"Blue Collar", "White Collar"}, {0, 0, 1});
    return users;
}

BetaMatrix beta_for(const DesignMatrix& design, const std::vector<std::string>& prefs) {
    BetaMatrix beta;
    beta.row_names = design.column_names;
    beta.preference_names = prefs;
    beta.values = Matrix(design.column_names.size(), prefs.size(), 3.0);
    return beta;
}

}  // namespace

TEST(EncodeUsers, OrdinalCodesThenOneHotBlocks) {
    UserTable users = small_users();
    DesignMatrix design = encode_users(users);
    ASSERT_EQ(design.column_names,
              (std::vector<std::string>{"Age", "Budget", "x0_Female", "x0_Male", "x1_Blue Collar",
                                        "x1_White Collar"}));
    // user 0: Age=4, Budget=1, Female, Blue Collar
    EXPECT_DOUBLE_EQ(design.values(0, 0), 4.0);
    EXPECT_DOUBLE_EQ(design.values(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(design.values(0, 2), 1.0);
    EXPECT_DOUBLE_EQ(design.values(0, 3), 0.0);
    EXPECT_DOUBLE_EQ(design.values(0, 4), 1.0);
    EXPECT_DOUBLE_EQ(design.values(0, 5), 0.0);
    // every one-hot block sums to exactly 1
    for (std::size_t u = 0; u < 3; ++u) {
        EXPECT_DOUBLE_EQ(design.values(u, 2) + design.values(u, 3), 1.0);
        EXPECT_DOUBLE_EQ(design.values(u, 4) + design.values(u, 5), 1.0);
    }
}

TEST(EncodeUsers, FullTourismSchemaRow) {
    // one user through the shipped feature set: codes (4,2,1,2), female
    // blue-collar from North Europe travelling as two adults
    GenerationSpec spec = default_spec();
    UserTable users;
    users.n_users = 1;
    const int ordinal_codes[4] = {4, 2, 1, 2};
    for (std::size_t f = 0; f < 4; ++f)
        users.add_ordinal(spec.ordinal_features[f], {ordinal_codes[f]});
    const char* labels[4] = {"Female", "Blue Collar", "North Europe", "2 Adults"};
    for (std::size_t f = 0; f < 4; ++f) {
        const auto& cats = spec.nominal_features[f].categories;
        int code = static_cast<int>(std::find(cats.begin(), cats.end(), labels[f]) - cats.begin());
        users.add_nominal(spec.nominal_features[f].name, cats, {code});
    }
    DesignMatrix design = encode_users(users);
    ASSERT_EQ(design.column_names, spec.beta.row_names);
    auto value_of = [&](const std::string& column) {
        for (std::size_t c = 0; c < design.column_names.size(); ++c)
            if (design.column_names[c] == column) return design.values(0, c);
        throw std::runtime_error("no column " + column);
    };
    EXPECT_DOUBLE_EQ(value_of("Age"), 4.0);
    EXPECT_DOUBLE_EQ(value_of("AcDeg"), 2.0);
    EXPECT_DOUBLE_EQ(value_of("Budget"), 1.0);
    EXPECT_DOUBLE_EQ(value_of("Accom"), 2.0);
    EXPECT_DOUBLE_EQ(value_of("x0_Female"), 1.0);
    EXPECT_DOUBLE_EQ(value_of("x0_Male"), 0.0);
    EXPECT_DOUBLE_EQ(value_of("x1_Blue Collar"), 1.0);
    EXPECT_DOUBLE_EQ(value_of("x2_North Europe"), 1.0);
    EXPECT_DOUBLE_EQ(value_of("x3_2 Adults"), 1.0);
    double onehot_total = 0.0;
    for (std::size_t c = 4; c < design.column_names.size(); ++c)
        onehot_total += design.values(0, c);
    EXPECT_DOUBLE_EQ(onehot_total, 4.0);  // exactly one per block
}

TEST(EncodeUsers, EmptyTableKeepsColumns) {
    UserTable users;
    users.n_users = 0;
    OrdinalFeatureSpec age{"Age", {"a", "b"}, {0.0}, false, {}};
    users.add_ordinal(age, {});
    users.add_nominal("Gender", {"Female", "Male"}, {});
    DesignMatrix design = encode_users(users);
    EXPECT_EQ(design.values.rows(), 0u);
    EXPECT_EQ(design.column_names.size(), 3u);
}

TEST(EncodeUsers, RejectsOutOfRangeCodes) {
    UserTable users;
    users.n_users = 1;
    OrdinalFeatureSpec age{"Age", {"a", "b"}, {0.0}, false, {}};
    users.add_ordinal(age, {3});
    EXPECT_THROW(encode_users(users), std::runtime_error);
    UserTable users2;
    users2.n_users = 1;
    users2.add_ordinal(age, {1});
    users2.add_nominal("Gender", {"Female", "Male"}, {2});
    EXPECT_THROW(encode_users(users2), std::runtime_error);
}

TEST(NormalizeBeta, SubtractsReferenceColumn) {
    BetaMatrix beta;
    beta.row_names = {"Age"};
    beta.preference_names = {"Beach", "Relax", "Shop", "Nightlife"};
    beta.values = Matrix(1, 4);
    beta.values(0, 0) = 2;
    beta.values(0, 1) = 5;
    beta.values(0, 2) = 3;
    beta.values(0, 3) = 1;
    BetaMatrix normalized = normalize_beta(beta, 0, 1.0);
    EXPECT_DOUBLE_EQ(normalized.values(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(normalized.values(0, 1), 3.0);
    EXPECT_DOUBLE_EQ(normalized.values(0, 2), 1.0);
    EXPECT_DOUBLE_EQ(normalized.values(0, 3), -1.0);
    // idempotent on an already-normalized matrix at tau = 1
    BetaMatrix twice = normalize_beta(normalized, 0, 1.0);
    EXPECT_EQ(twice.values, normalized.values);
    // tau = 0 flattens everything
    BetaMatrix flat = normalize_beta(beta, 0, 0.0);
    for (double v : flat.values.data()) EXPECT_DOUBLE_EQ(v, 0.0);
    // temperature scales
    BetaMatrix half = normalize_beta(beta, 0, 0.5);
    EXPECT_DOUBLE_EQ(half.values(0, 1), 1.5);
}

TEST(NormalizeBeta, RejectsBadReference) {
    BetaMatrix beta;
    beta.row_names = {"Age"};
    beta.preference_names = {"A", "B"};
    beta.values = Matrix(1, 2, 1.0);
    EXPECT_THROW(normalize_beta(beta, 2, 1.0), std::invalid_argument);
}

TEST(ComputeUtilities, ZeroNoiseHookIsExact) {
    UserTable users;
    users.n_users = 1;
    OrdinalFeatureSpec f{"F", {"a", "b"}, {0.0}, false, {}};
    users.add_ordinal(f, {1});
    DesignMatrix design = encode_users(users);
    BetaMatrix beta = beta_for(design, {"P0", "P1"});
    beta.values(0, 0) = 0.0;
    beta.values(0, 1) = 2.0;
    StreamFamily family(1);
    Matrix u = compute_utilities(design, beta, family, false);
    EXPECT_DOUBLE_EQ(u(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(u(0, 1), 2.0);
}

TEST(ComputeUtilities, PureNoiseHasGumbelMean) {
    const std::size_t n = 100000;
    UserTable users;
    users.n_users = n;
    OrdinalFeatureSpec f{"F", {"a", "b"}, {0.0}, false, {}};
    users.add_ordinal(f, std::vector<int>(n, 1));
    DesignMatrix design = encode_users(users);
    BetaMatrix beta = beta_for(design, {"P0", "P1", "P2"});
    for (double& v : beta.values.data()) v = 0.0;
    StreamFamily family(42);
    Matrix u = compute_utilities(design, beta, family, true);
    const double euler_mascheroni = 0.5772156649;
    for (std::size_t j = 0; j < 3; ++j) {
        double mean = 0;
        for (std::size_t i = 0; i < n; ++i) mean += u(i, j);
        EXPECT_NEAR(mean / n, euler_mascheroni, 0.01) << "column " << j;
    }
}

TEST(ComputeUtilities, RejectsMismatchedColumns) {
    UserTable users = small_users();
    DesignMatrix design = encode_users(users);
    BetaMatrix beta = beta_for(design, {"P0", "P1"});
    beta.row_names[0] = "NotAge";
    StreamFamily family(1);
    EXPECT_THROW(compute_utilities(design, beta, family), std::invalid_argument);
}

TEST(ComputeUtilities, ThreadCountDoesNotChangeNoise) {
    UserTable users = small_users();
    DesignMatrix design = encode_users(users);
    BetaMatrix beta = beta_for(design, {"P0", "P1"});
    StreamFamily family(3);
    Matrix one = compute_utilities(design, beta, family, true, 1);
    Matrix eight = compute_utilities(design, beta, family, true, 8);
    EXPECT_EQ(one, eight);
}

TEST(PreferenceProbabilities, UniformOnFlatRow) {
    Matrix u(1, 10, 0.0);
    Matrix p = preference_probabilities(u);
    for (std::size_t j = 0; j < 10; ++j) EXPECT_NEAR(p(0, j), 0.1, 1e-15);
}

TEST(PreferenceProbabilities, DominantUtilityTakesAll) {
    Matrix u(1, 3, 0.0);
    u(0, 0) = 20.0;
    Matrix p = preference_probabilities(u);
    EXPECT_GT(p(0, 0), 0.9999);
}

TEST(PreferenceProbabilities, ClosedFormTwoWay) {
    Matrix u(1, 2, 0.0);
    u(0, 0) = std::log(2.0);
    Matrix p = preference_probabilities(u);
    EXPECT_NEAR(p(0, 0), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(p(0, 1), 1.0 / 3.0, 1e-12);
}

TEST(PreferenceProbabilities, RowsSumToOneEvenForExtremeUtilities) {
    RngStream rng(8, 0);
    Matrix u(500, 7);
    for (double& v : u.data()) v = (rng.next_double() - 0.5) * 2000.0;
    Matrix p = preference_probabilities(u);
    for (std::size_t i = 0; i < p.rows(); ++i) {
        double total = 0;
        for (std::size_t j = 0; j < p.cols(); ++j) {
            ASSERT_GE(p(i, j), 0.0);
            total += p(i, j);
        }
        ASSERT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(PreferenceProbabilities, ShiftInvariance) {
    RngStream rng(9, 0);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix u(1, 5);
        for (double& v : u.data()) v = rng.next_double() * 10 - 5;
        Matrix base = preference_probabilities(u);
        double shift = rng.next_double() * 100 - 50;
        Matrix shifted_u = u;
        for (double& v : shifted_u.data()) v += shift;
        Matrix shifted = preference_probabilities(shifted_u);
        for (std::size_t j = 0; j < 5; ++j) ASSERT_NEAR(base(0, j), shifted(0, j), 1e-12);
    }
}

TEST(PreferenceProbabilities, MonotoneInOwnUtility) {
    Matrix u(1, 4);
    u(0, 0) = 0.3;
    u(0, 1) = -0.2;
    u(0, 2) = 1.0;
    u(0, 3) = 0.0;
    Matrix before = preference_probabilities(u);
    u(0, 1) += 0.75;
    Matrix after = preference_probabilities(u);
    EXPECT_GT(after(0, 1), before(0, 1));
    for (std::size_t j : {0u, 2u, 3u}) EXPECT_LT(after(0, j), before(0, j));
}

TEST(PreferenceProbabilities, ArgmaxFollowsDeterministicUtility) {
    UserTable users = small_users();
    DesignMatrix design = encode_users(users);
    BetaMatrix beta = beta_for(design, {"P0", "P1", "P2"});
    RngStream rng(10, 0);
    for (double& v : beta.values.data()) v = rng.next_double() * 4 - 2;
    StreamFamily family(5);
    Matrix v = compute_utilities(design, beta, family, false);
    Matrix p = preference_probabilities(v);
    for (std::size_t i = 0; i < v.rows(); ++i) {
        std::size_t argmax_v = 0, argmax_p = 0;
        for (std::size_t j = 1; j < v.cols(); ++j) {
            if (v(i, j) > v(i, argmax_v)) argmax_v = j;
            if (p(i, j) > p(i, argmax_p)) argmax_p = j;
        }
        EXPECT_EQ(argmax_v, argmax_p);
    }
}
