#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "recsynth/matrix.hpp"
#include "recsynth/parallel.hpp"
#include "recsynth/rng.hpp"
#include "recsynth/stats.hpp"
#include "recsynth/user_table.hpp"

namespace recsynth {

/// Marginal-utility weights: one row per design-matrix column, one column
/// per preference category.
struct BetaMatrix {
    std::vector<std::string> row_names;
    std::vector<std::string> preference_names;
    Matrix values;  // rows x preferences

    void validate() const {
        if (row_names.size() != values.rows() || preference_names.size() != values.cols())
            throw std::invalid_argument("beta matrix: header/value shape mismatch");
        if (preference_names.size() < 2)
            throw std::invalid_argument("beta matrix: needs at least 2 preference columns");
        for (double v : values.data())
            if (!std::isfinite(v)) throw std::invalid_argument("beta matrix: non-finite entry");
    }
};

struct DesignMatrix {
    std::vector<std::string> column_names;
    Matrix values;  // n_users x F
};

/// Design-matrix column names implied by the feature specs: ordinal
/// features by name, then one one-hot block per nominal feature with
/// columns named "x{i}_{category}".
inline std::vector<std::string> design_column_names(
    const std::vector<std::string>& ordinal_names,
    const std::vector<std::vector<std::string>>& nominal_categories) {
    std::vector<std::string> names(ordinal_names);
    for (std::size_t f = 0; f < nominal_categories.size(); ++f)
        for (const auto& cat : nominal_categories[f])
            names.push_back("x" + std::to_string(f) + "_" + cat);
    return names;
}

/// Ordinal codes enter as raw 1..K values; nominal features one-hot.
inline DesignMatrix encode_users(const UserTable& users) {
    DesignMatrix out;
    out.column_names = design_column_names(users.ordinal_features, users.nominal_categories);
    const std::size_t n = users.n_users;
    out.values = Matrix(n, out.column_names.size());
    const std::size_t d = users.ordinal_features.size();
    for (std::size_t f = 0; f < d; ++f) {
        const auto& codes = users.ordinal_codes[f];
        const int k = static_cast<int>(users.ordinal_labels[f].size());
        for (std::size_t u = 0; u < n; ++u) {
            if (codes[u] < 1 || codes[u] > k)
                throw std::runtime_error("encode_users: ordinal code out of range for feature '" +
                                         users.ordinal_features[f] + "', user " + std::to_string(u));
            out.values(u, f) = static_cast<double>(codes[u]);
        }
    }
    std::size_t offset = d;
    for (std::size_t f = 0; f < users.nominal_features.size(); ++f) {
        const auto& codes = users.nominal_codes[f];
        const std::size_t m = users.nominal_categories[f].size();
        for (std::size_t u = 0; u < n; ++u) {
            if (codes[u] < 0 || static_cast<std::size_t>(codes[u]) >= m)
                throw std::runtime_error("encode_users: unknown label for feature '" +
                                         users.nominal_features[f] + "', user " + std::to_string(u));
            out.values(u, offset + static_cast<std::size_t>(codes[u])) = 1.0;
        }
        offset += m;
    }
    return out;
}

/// Identifies the model against one reference preference: subtract that
/// column from every other, then scale by the temperature. The reference
/// column comes out all zero; smaller tau means flatter preference rows.
inline BetaMatrix normalize_beta(const BetaMatrix& beta, std::size_t ref_pref_id, double tau) {
    beta.validate();
    if (ref_pref_id >= beta.preference_names.size())
        throw std::invalid_argument("normalize_beta: reference preference index " +
                                    std::to_string(ref_pref_id) + " out of range");
    if (!(tau >= 0.0))
        throw std::invalid_argument("normalize_beta: tau must be non-negative");
    BetaMatrix out = beta;
    for (std::size_t r = 0; r < out.values.rows(); ++r) {
        const double ref = beta.values(r, ref_pref_id);
        for (std::size_t j = 0; j < out.values.cols(); ++j)
            out.values(r, j) = tau * (beta.values(r, j) - ref);
    }
    return out;
}

/// U = X * beta + E with E iid standard Gumbel (one substream per user).
/// with_noise=false is the deterministic test hook: U = X * beta exactly.
inline Matrix compute_utilities(const DesignMatrix& design, const BetaMatrix& beta_norm,
                                const StreamFamily& streams, bool with_noise = true,
                                unsigned threads = 1) {
    if (design.column_names != beta_norm.row_names)
        throw std::invalid_argument(
            "compute_utilities: design columns do not match beta rows (first design column '" +
            (design.column_names.empty() ? std::string("<none>") : design.column_names.front()) +
            "')");
    Matrix u = design.values.multiply(beta_norm.values);
    if (!with_noise) return u;
    const std::size_t j = u.cols();
    parallel_for(0, u.rows(), threads, [&](std::size_t row) {
        RngStream rng = streams.stream("mnl-noise", row);
        double* p = u.row_ptr(row);
        for (std::size_t c = 0; c < j; ++c) p[c] += gumbel_inv_cdf(rng.next_open01());
    });
    return u;
}

/// Row-wise softmax with max subtraction. Rows sum to 1 up to rounding.
inline Matrix preference_probabilities(const Matrix& utilities) {
    Matrix out(utilities.rows(), utilities.cols());
    for (std::size_t i = 0; i < utilities.rows(); ++i) {
        const double* u = utilities.row_ptr(i);
        double* p = out.row_ptr(i);
        double hi = u[0];
        for (std::size_t j = 1; j < utilities.cols(); ++j) hi = std::max(hi, u[j]);
        double total = 0.0;
        for (std::size_t j = 0; j < utilities.cols(); ++j) {
            p[j] = std::exp(u[j] - hi);
            total += p[j];
        }
        for (std::size_t j = 0; j < utilities.cols(); ++j) p[j] /= total;
    }
    return out;
}

}  // namespace recsynth
