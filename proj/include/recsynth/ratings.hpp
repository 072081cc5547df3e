#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recsynth/catalog.hpp"
#include "recsynth/fuzzy.hpp"
#include "recsynth/matrix.hpp"
#include "recsynth/parallel.hpp"
#include "recsynth/rng.hpp"

namespace recsynth {

struct UserBehavior {
    std::uint32_t user_id = 0;
    double bias = 3.0;    // average rating level, 1..5
    double spread = 2.5;  // rating dispersion, 1..4
};

struct ItemQuality {
    std::uint32_t item_id = 0;
    double quality = 3.0;  // perceived quality, 1..5
};

struct RatingTriple {
    std::uint32_t user_id = 0;
    std::uint32_t item_id = 0;
    double rating = 0.0;
};

struct SparseRatings {
    std::vector<RatingTriple> triples;  // sorted by (user, item), one per selected cell
};

/// Default rating inference variables: quality/bias on [1,5], spread on
/// [1,4], preference on [0,1], rating output on [1,5]. All triangles over
/// uniform peaks except spread, which saturates toward the ends.
inline std::vector<LinguisticVariable> default_rating_inputs() {
    using MF = MembershipFunction;
    LinguisticVariable preference{"preference", 0.0, 1.0, 0.01,
                                  {{"hates", MF::triangle(0.0, 0.0, 1.0 / 3.0)},
                                   {"lukewarm", MF::triangle(0.0, 1.0 / 3.0, 2.0 / 3.0)},
                                   {"likes", MF::triangle(1.0 / 3.0, 2.0 / 3.0, 1.0)},
                                   {"loves", MF::triangle(2.0 / 3.0, 1.0, 1.0)}}};
    LinguisticVariable spread{"spread", 1.0, 4.0, 0.01,
                              {{"tight", MF::trapezoid(1.0, 1.0, 1.75, 3.25)},
                               {"wide", MF::trapezoid(1.75, 3.25, 4.0, 4.0)}}};
    LinguisticVariable bias{"bias", 1.0, 5.0, 0.01,
                            {{"low", MF::triangle(1.0, 1.0, 3.0)},
                             {"mid", MF::triangle(1.0, 3.0, 5.0)},
                             {"high", MF::triangle(3.0, 5.0, 5.0)}}};
    LinguisticVariable quality{"quality", 1.0, 5.0, 0.01,
                               {{"bad", MF::triangle(1.0, 1.0, 7.0 / 3.0)},
                                {"ok", MF::triangle(1.0, 7.0 / 3.0, 11.0 / 3.0)},
                                {"good", MF::triangle(7.0 / 3.0, 11.0 / 3.0, 5.0)},
                                {"great", MF::triangle(11.0 / 3.0, 5.0, 5.0)}}};
    return {preference, spread, bias, quality};
}

inline LinguisticVariable default_rating_output(double resolution = 0.01) {
    using MF = MembershipFunction;
    return LinguisticVariable{"rating", 1.0, 5.0, resolution,
                              {{"vlow", MF::triangle(1.0, 1.0, 2.0)},
                               {"low", MF::triangle(1.0, 2.0, 3.0)},
                               {"mid", MF::triangle(2.0, 3.0, 4.0)},
                               {"high", MF::triangle(3.0, 4.0, 5.0)},
                               {"vhigh", MF::triangle(4.0, 5.0, 5.0)}}};
}

namespace detail {

/// The 24 hand-written rules for the 'hates' preference band:
/// (spread, bias, quality) -> rating term.
struct HatesRule {
    const char* spread;
    const char* bias;
    const char* quality;
    const char* rating;
};

inline constexpr std::array<HatesRule, 24> kHatesRules{{
    {"tight", "low", "bad", "vlow"},   {"tight", "low", "ok", "vlow"},
    {"tight", "low", "good", "vlow"},  {"tight", "low", "great", "low"},
    {"tight", "mid", "bad", "vlow"},   {"tight", "mid", "ok", "vlow"},
    {"tight", "mid", "good", "low"},   {"tight", "mid", "great", "low"},
    {"tight", "high", "bad", "vlow"},  {"tight", "high", "ok", "low"},
    {"tight", "high", "good", "low"},  {"tight", "high", "great", "mid"},
    {"wide", "low", "bad", "vlow"},    {"wide", "low", "ok", "vlow"},
    {"wide", "low", "good", "vlow"},   {"wide", "low", "great", "vlow"},
    {"wide", "mid", "bad", "vlow"},    {"wide", "mid", "ok", "vlow"},
    {"wide", "mid", "good", "vlow"},   {"wide", "mid", "great", "mid"},
    {"wide", "high", "bad", "vlow"},   {"wide", "high", "ok", "vlow"},
    {"wide", "high", "good", "mid"},   {"wide", "high", "great", "mid"},
}};

inline constexpr std::array<const char*, 5> kRatingLevels{"vlow", "low", "mid", "high", "vhigh"};
inline constexpr std::array<const char*, 4> kPreferenceBands{"hates", "lukewarm", "likes", "loves"};

inline std::size_t rating_level_index(std::string_view label) {
    for (std::size_t i = 0; i < kRatingLevels.size(); ++i)
        if (kRatingLevels[i] == label) return i;
    throw std::invalid_argument("unknown rating level '" + std::string(label) + "'");
}

}  // namespace detail

/// Full 96-rule base: the 'hates' band verbatim, the remaining bands
/// derived by lifting each consequent one output level per band, capped
/// at 'vhigh'.
inline RuleBase default_rating_rules() {
    RuleBase base;
    base.rules.reserve(96);
    for (std::size_t band = 0; band < detail::kPreferenceBands.size(); ++band) {
        for (const auto& r : detail::kHatesRules) {
            std::size_t level =
                std::min<std::size_t>(detail::rating_level_index(r.rating) + band,
                                      detail::kRatingLevels.size() - 1);
            FuzzyRule rule;
            rule.antecedent = {{"preference", detail::kPreferenceBands[band]},
                               {"spread", r.spread},
                               {"bias", r.bias},
                               {"quality", r.quality}};
            rule.consequent = {"rating", detail::kRatingLevels[level]};
            base.rules.push_back(std::move(rule));
        }
    }
    return base;
}

/// Per-user behaviour traits, Uniform(1,5) bias and Uniform(1,4) spread,
/// drawn sequentially from one stream.
inline std::vector<UserBehavior> assign_behaviors(std::size_t n_users, RngStream& rng) {
    if (n_users == 0) throw std::invalid_argument("assign_behaviors: n_users must be >= 1");
    std::vector<UserBehavior> out(n_users);
    for (std::size_t u = 0; u < n_users; ++u) {
        out[u].user_id = static_cast<std::uint32_t>(u);
        out[u].bias = 1.0 + 4.0 * rng.next_double();
        out[u].spread = 1.0 + 3.0 * rng.next_double();
    }
    return out;
}

/// Per-item perceived quality, Uniform(1,5).
inline std::vector<ItemQuality> assign_quality(std::size_t n_items, RngStream& rng) {
    if (n_items == 0) throw std::invalid_argument("assign_quality: n_items must be >= 1");
    std::vector<ItemQuality> out(n_items);
    for (std::size_t i = 0; i < n_items; ++i) {
        out[i].item_id = static_cast<std::uint32_t>(i);
        out[i].quality = 1.0 + 4.0 * rng.next_double();
    }
    return out;
}

/// Exactly round(density * n * m) distinct (user, item) cells, uniform
/// without replacement, sorted.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> select_rated_cells(
    std::size_t n_users, std::size_t n_items, double density, RngStream& rng) {
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("select_rated_cells: density must lie in (0, 1], got " +
                                    std::to_string(density));
    const std::uint64_t n_cells = static_cast<std::uint64_t>(n_users) * n_items;
    const std::uint64_t k =
        static_cast<std::uint64_t>(std::llround(density * static_cast<double>(n_cells)));
    std::vector<std::uint64_t> flat = sample_distinct_cells(n_cells, k, rng);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cells(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i)
        cells[i] = {static_cast<std::uint32_t>(flat[i] / n_items),
                    static_cast<std::uint32_t>(flat[i] % n_items)};
    return cells;
}

struct RatingOptions {
    /// Memoize inferences on inputs quantized to cache_step. Off by
    /// default; when on, results may differ from the exact path by less
    /// than 0.01.
    bool cache = false;
    double cache_step = 0.001;
    unsigned threads = 1;
};

/// Runs the inference once per selected cell with inputs
/// (affinity, spread, bias, quality). Cells are independent, so the loop
/// is parallel; caches are per-thread and keyed by quantized inputs.
inline SparseRatings generate_ratings(
    const Matrix& affinity, const std::vector<UserBehavior>& behaviors,
    const std::vector<ItemQuality>& qualities,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& cells, const MamdaniFis& fis,
    const RatingOptions& options = {}) {
    if (behaviors.size() != affinity.rows() || qualities.size() != affinity.cols())
        throw std::invalid_argument("generate_ratings: behaviour/quality tables do not match the affinity matrix");
    RuleCoverageReport coverage = validate_rulebase(fis.rules(), fis.inputs());
    if (!coverage.complete())
        throw std::runtime_error("generate_ratings: rule base does not cover all input combinations (" +
                                 std::to_string(coverage.covered) + "/" +
                                 std::to_string(coverage.total_combinations) + ")");

    if (options.cache && !(options.cache_step > 0.0))
        throw std::invalid_argument("generate_ratings: cache_step must be positive");

    SparseRatings out;
    out.triples.resize(cells.size());

    const unsigned threads = options.threads ? options.threads : 1;
    std::vector<std::unordered_map<std::uint64_t, double>> caches(options.cache ? threads : 0);

    parallel_for_workers(0, cells.size(), threads, [&](unsigned worker, std::size_t i) {
        const auto [u, it] = cells[i];
        double inputs[4] = {affinity(u, it), behaviors[u].spread, behaviors[u].bias,
                            qualities[it].quality};
        double rating;
        if (options.cache) {
            auto& cache = caches[worker];
            std::uint64_t key = 0;
            for (double v : inputs) {
                std::uint64_t q = static_cast<std::uint64_t>(
                    std::llround(v / options.cache_step) + (1LL << 15));
                key = (key << 16) | (q & 0xffff);
            }
            auto found = cache.find(key);
            if (found != cache.end()) {
                rating = found->second;
            } else {
                double quantized[4];
                for (int j = 0; j < 4; ++j)
                    quantized[j] = std::llround(inputs[j] / options.cache_step) * options.cache_step;
                rating = fis.infer(quantized);
                cache.emplace(key, rating);
            }
        } else {
            rating = fis.infer(inputs);
        }
        out.triples[i] = {u, it, rating};
    });
    return out;
}

}  // namespace recsynth
