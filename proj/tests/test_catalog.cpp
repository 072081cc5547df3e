#include "recsynth/catalog.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace recsynth;

namespace {

const std::vector<std::string> kCategories{"Beach",      "Relax",  "Shop",    "Nightlife",
                                           "Theme park", "Gastro", "Sports",  "Culture",
                                           "Nature",     "Events"};

ItemCatalog small_catalog() {
    ItemCatalog catalog;
    catalog.items = {{0, "Mall", {"Shop", "Relax"}},
                     {1, "Beach A", {"Beach"}},
                     {2, "Everything", kCategories}};
    return catalog;
}

}  // namespace

TEST(VectorizeCatalog, BinaryRows) {
    Matrix icat = vectorize_catalog(small_catalog(), kCategories);
    ASSERT_EQ(icat.rows(), 3u);
    ASSERT_EQ(icat.cols(), 10u);
    // "Mall": ones exactly at Relax and Shop
    for (std::size_t c = 0; c < 10; ++c)
        EXPECT_DOUBLE_EQ(icat(0, c), (c == 1 || c == 2) ? 1.0 : 0.0);
    // "Beach A": one at Beach only
    for (std::size_t c = 0; c < 10; ++c) EXPECT_DOUBLE_EQ(icat(1, c), c == 0 ? 1.0 : 0.0);
    // an item holding every category is an all-ones row
    for (std::size_t c = 0; c < 10; ++c) EXPECT_DOUBLE_EQ(icat(2, c), 1.0);
}

TEST(VectorizeCatalog, RejectsUnknownCategory) {
    ItemCatalog catalog;
    catalog.items = {{0, "Oddity", {"Volcano"}}};
    EXPECT_THROW(vectorize_catalog(catalog, kCategories), std::invalid_argument);
}

TEST(ItemCatalog, RejectsBadIdsAndEmptyCategories) {
    ItemCatalog gap;
    gap.items = {{0, "a", {"Beach"}}, {2, "b", {"Beach"}}};
    EXPECT_THROW(gap.validate(), std::invalid_argument);
    ItemCatalog empty_cat;
    empty_cat.items = {{0, "a", {}}};
    EXPECT_THROW(empty_cat.validate(), std::invalid_argument);
}

TEST(UserItemAffinity, SumsPreferenceMassOverItemCategories) {
    // preference row from a generated sample; items picked to cover the
    // single- and two-category cases
    Matrix prefs(1, 10, 0.0);
    prefs(0, 0) = 0.408;  // Beach
    prefs(0, 1) = 0.026;  // Relax
    prefs(0, 2) = 0.020;  // Shop
    prefs(0, 8) = 0.487;  // Nature

    ItemCatalog catalog;
    catalog.items = {{0, "Mall", {"Shop", "Relax"}},
                     {1, "Route", {"Nature", "Relax"}},
                     {2, "Beach spot", {"Beach"}}};
    Matrix icat = vectorize_catalog(catalog, kCategories);
    Matrix affinity = user_item_affinity(prefs, icat);
    EXPECT_NEAR(affinity(0, 0), 0.046, 1e-12);
    EXPECT_NEAR(affinity(0, 1), 0.513, 1e-12);
    EXPECT_NEAR(affinity(0, 2), 0.408, 1e-12);
}

TEST(UserItemAffinity, RejectsDimensionMismatch) {
    Matrix prefs(1, 9);
    Matrix icat(2, 10);
    EXPECT_THROW(user_item_affinity(prefs, icat), std::invalid_argument);
}

TEST(UserItemAffinity, StaysInsideUnitInterval) {
    RngStream rng(4, 0);
    const std::size_t n = 500, j = 10;
    Matrix prefs(n, j);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0;
        for (std::size_t c = 0; c < j; ++c) {
            prefs(i, c) = -std::log(rng.next_open01());
            total += prefs(i, c);
        }
        for (std::size_t c = 0; c < j; ++c) prefs(i, c) /= total;
    }
    Matrix icat(7, j);
    for (std::size_t i = 0; i < icat.rows(); ++i)
        for (std::size_t c = 0; c < j; ++c) icat(i, c) = rng.next_double() < 0.3 ? 1.0 : 0.0;
    Matrix affinity = user_item_affinity(prefs, icat);
    for (double v : affinity.data()) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
    }
}

TEST(UserItemAffinity, IdenticalCategorySetsGiveIdenticalColumns) {
    RngStream rng(5, 0);
    Matrix prefs(200, 10);
    for (std::size_t i = 0; i < prefs.rows(); ++i) {
        double total = 0;
        for (std::size_t c = 0; c < 10; ++c) {
            prefs(i, c) = -std::log(rng.next_open01());
            total += prefs(i, c);
        }
        for (std::size_t c = 0; c < 10; ++c) prefs(i, c) /= total;
    }
    ItemCatalog catalog;
    catalog.items = {{0, "Secret Beach", {"Beach"}}, {1, "Fake Beach", {"Beach"}}};
    Matrix affinity = user_item_affinity(prefs, vectorize_catalog(catalog, kCategories));
    for (std::size_t u = 0; u < affinity.rows(); ++u)
        ASSERT_EQ(affinity(u, 0), affinity(u, 1));
}

TEST(AddSparseNoise, ZeroDensityIsIdentity) {
    Matrix m(50, 20, 0.25);
    RngStream rng(6, 0);
    Matrix out = add_sparse_noise(m, 0.0, rng);
    EXPECT_EQ(out, m);
}

TEST(AddSparseNoise, PerturbsExactlyTheConfiguredCells) {
    const std::size_t n = 400, items = 25;
    Matrix m(n, items, 0.5);
    RngStream rng(7, 0);
    Matrix out = add_sparse_noise(m, 0.01, rng);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < m.data().size(); ++i)
        if (out.data()[i] != m.data()[i]) ++changed;
    // exactly round(0.01 * 10000) distinct cells; additive U(0,1) hits a
    // zero perturbation with probability 0
    EXPECT_EQ(changed, 100u);
}

TEST(AddSparseNoise, ClampsIntoUnitInterval) {
    Matrix m(30, 30, 0.95);
    RngStream rng(8, 0);
    Matrix out = add_sparse_noise(m, 1.0, rng);
    for (double v : out.data()) {
        ASSERT_GE(v, 0.95);
        ASSERT_LE(v, 1.0);
    }
}

TEST(AddSparseNoise, RejectsBadDensity) {
    Matrix m(2, 2);
    RngStream rng(9, 0);
    EXPECT_THROW(add_sparse_noise(m, -0.1, rng), std::invalid_argument);
    EXPECT_THROW(add_sparse_noise(m, 1.5, rng), std::invalid_argument);
}

TEST(SampleDistinctCells, ExactCountAndDistinctness) {
    RngStream rng(10, 0);
    auto cells = sample_distinct_cells(1000, 150, rng);
    EXPECT_EQ(cells.size(), 150u);
    for (std::size_t i = 1; i < cells.size(); ++i) ASSERT_LT(cells[i - 1], cells[i]);
    ASSERT_LT(cells.back(), 1000u);
    // full selection
    auto all = sample_distinct_cells(64, 64, rng);
    EXPECT_EQ(all.size(), 64u);
    EXPECT_EQ(all.front(), 0u);
    EXPECT_EQ(all.back(), 63u);
}

TEST(SampleDistinctCells, UniformCoverage) {
    RngStream rng(11, 0);
    const std::uint64_t n = 100;
    std::vector<int> hits(n, 0);
    const int draws = 20000;
    for (int d = 0; d < draws; ++d)
        for (auto c : sample_distinct_cells(n, 10, rng)) ++hits[c];
    const double expected = draws * 10.0 / n;  // 2000 per cell
    const double sd = std::sqrt(draws * 0.1 * 0.9);
    for (std::uint64_t c = 0; c < n; ++c) EXPECT_NEAR(hits[c], expected, 5 * sd) << "cell " << c;
}
