#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "recsynth/copula.hpp"

namespace recsynth {

/// Generated per-user demographics: ordinal codes plus nominal category
/// indices, with enough naming information to resolve labels. Columns are
/// appended in generation order.
struct UserTable {
    std::size_t n_users = 0;

    std::vector<std::string> ordinal_features;
    std::vector<std::vector<std::string>> ordinal_labels;   // per feature, label per code-1
    std::vector<std::vector<int>> ordinal_codes;            // per feature, 1..K per user
    std::vector<std::vector<double>> continuous_proxies;    // empty unless requested

    std::vector<std::string> nominal_features;
    std::vector<std::vector<std::string>> nominal_categories;
    std::vector<std::vector<int>> nominal_codes;             // per feature, 0-based per user

    void add_ordinal(const OrdinalFeatureSpec& spec, std::vector<int> codes,
                     std::vector<double> proxy = {}) {
        ordinal_features.push_back(spec.name);
        ordinal_labels.push_back(spec.labels);
        ordinal_codes.push_back(std::move(codes));
        continuous_proxies.push_back(std::move(proxy));
    }

    void add_nominal(std::string name, std::vector<std::string> categories,
                     std::vector<int> codes) {
        nominal_features.push_back(std::move(name));
        nominal_categories.push_back(std::move(categories));
        nominal_codes.push_back(std::move(codes));
    }

    /// Label of `feature` for user u, searching ordinal then nominal columns.
    std::optional<std::string> label_of(std::string_view feature, std::size_t u) const {
        for (std::size_t f = 0; f < ordinal_features.size(); ++f)
            if (ordinal_features[f] == feature)
                return ordinal_labels[f][static_cast<std::size_t>(ordinal_codes[f][u]) - 1];
        for (std::size_t f = 0; f < nominal_features.size(); ++f)
            if (nominal_features[f] == feature)
                return nominal_categories[f][static_cast<std::size_t>(nominal_codes[f][u])];
        return std::nullopt;
    }

    bool has_feature(std::string_view feature) const {
        for (const auto& n : ordinal_features)
            if (n == feature) return true;
        for (const auto& n : nominal_features)
            if (n == feature) return true;
        return false;
    }
};

}  // namespace recsynth
