#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "recsynth/matrix.hpp"
#include "recsynth/rng.hpp"

namespace recsynth {

struct CatalogItem {
    int id = 0;
    std::string name;
    std::vector<std::string> categories;
};

struct ItemCatalog {
    std::vector<CatalogItem> items;

    std::size_t size() const { return items.size(); }

    void validate() const {
        if (items.empty()) throw std::invalid_argument("item catalog: empty");
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i].id != static_cast<int>(i))
                throw std::invalid_argument("item catalog: ids must be contiguous from 0, item " +
                                            std::to_string(i) + " has id " +
                                            std::to_string(items[i].id));
            if (items[i].categories.empty())
                throw std::invalid_argument("item catalog: item '" + items[i].name +
                                            "' has no categories");
        }
    }
};

/// Binary items x categories incidence matrix in the given category order.
inline Matrix vectorize_catalog(const ItemCatalog& catalog,
                                const std::vector<std::string>& category_order) {
    catalog.validate();
    Matrix icat(catalog.size(), category_order.size());
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        for (const auto& cat : catalog.items[i].categories) {
            auto it = std::find(category_order.begin(), category_order.end(), cat);
            if (it == category_order.end())
                throw std::invalid_argument("item catalog: item '" + catalog.items[i].name +
                                            "' uses unknown category '" + cat + "'");
            icat(i, static_cast<std::size_t>(it - category_order.begin())) = 1.0;
        }
    }
    return icat;
}

/// UserItem(u, i) = sum over categories of prefs(u, c) * icat(i, c): the
/// probability mass a user assigns to the categories an item belongs to.
inline Matrix user_item_affinity(const Matrix& prefs, const Matrix& icat) {
    if (prefs.cols() != icat.cols())
        throw std::invalid_argument("user_item_affinity: preference and category dimensions disagree (" +
                                    std::to_string(prefs.cols()) + " vs " +
                                    std::to_string(icat.cols()) + ")");
    return prefs.multiply_transposed(icat);
}

/// Uniformly selects exactly k distinct cells of an n x m grid (Floyd's
/// algorithm), returned sorted by linear index.
inline std::vector<std::uint64_t> sample_distinct_cells(std::uint64_t n_cells, std::uint64_t k,
                                                        RngStream& rng) {
    if (k > n_cells)
        throw std::invalid_argument("sample_distinct_cells: requested " + std::to_string(k) +
                                    " cells out of " + std::to_string(n_cells));
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k) * 2);
    for (std::uint64_t j = n_cells - k; j < n_cells; ++j) {
        std::uint64_t t = rng.next_below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> cells(chosen.begin(), chosen.end());
    std::sort(cells.begin(), cells.end());
    return cells;
}

/// Adds Uniform(0,1) to round(noise_density * n * m) uniformly chosen
/// distinct cells and clamps the result back into [0, 1]. Selection and
/// value assignment are sequential on the given stream, in sorted cell
/// order, so the perturbation is reproducible.
inline Matrix add_sparse_noise(Matrix m, double noise_density, RngStream& rng) {
    if (!(noise_density >= 0.0 && noise_density <= 1.0))
        throw std::invalid_argument("add_sparse_noise: density must lie in [0, 1]");
    const std::uint64_t n_cells = static_cast<std::uint64_t>(m.rows()) * m.cols();
    const std::uint64_t k = static_cast<std::uint64_t>(std::llround(noise_density * static_cast<double>(n_cells)));
    if (k == 0) return m;
    std::vector<std::uint64_t> cells = sample_distinct_cells(n_cells, k, rng);
    for (std::uint64_t cell : cells) {
        double& v = m.data()[static_cast<std::size_t>(cell)];
        v = std::clamp(v + rng.next_double(), 0.0, 1.0);
    }
    return m;
}

}  // namespace recsynth
