#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "recsynth/matrix.hpp"
#include "recsynth/parallel.hpp"
#include "recsynth/rng.hpp"
#include "recsynth/stats.hpp"

namespace recsynth {

/// Ordinal feature: K ordered labels separated by K-1 strictly increasing
/// cutoffs on the latent standard-normal axis.
struct OrdinalFeatureSpec {
    std::string name;
    std::vector<std::string> labels;
    std::vector<double> cutoffs;
    /// Optional continuous companion column: when set, a value is drawn
    /// uniformly inside the numeric range of the user's bin.
    bool continuous_proxy = false;
    std::vector<std::pair<double, double>> bin_ranges;

    std::size_t cardinality() const { return labels.size(); }

    void validate() const {
        if (labels.size() < 2)
            throw std::invalid_argument("ordinal feature '" + name + "': needs at least 2 labels");
        if (cutoffs.size() + 1 != labels.size())
            throw std::invalid_argument("ordinal feature '" + name + "': expected " +
                                        std::to_string(labels.size() - 1) + " cutoffs, got " +
                                        std::to_string(cutoffs.size()));
        for (std::size_t i = 1; i < cutoffs.size(); ++i)
            if (!(cutoffs[i - 1] < cutoffs[i]))
                throw std::invalid_argument("ordinal feature '" + name +
                                            "': cutoffs must be strictly increasing");
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != labels.size())
            throw std::invalid_argument("ordinal feature '" + name + "': duplicate labels");
        if (continuous_proxy && bin_ranges.size() != labels.size())
            throw std::invalid_argument("ordinal feature '" + name +
                                        "': continuous_proxy requires one bin_range per label");
    }
};

/// Correlated standard-normal latent draws, one row per user.
struct LatentMatrix {
    Matrix values;  // n_users x d
    std::size_t n_users() const { return values.rows(); }
    std::size_t dim() const { return values.cols(); }
};

struct OrdinalCodeColumn {
    std::string feature;
    std::vector<int> codes;  // 1..K
};

/// Draws X = F * Z with F the Cholesky factor of P and Z built from
/// uniform draws pushed through the normal quantile function. Each user
/// owns the substream ("latents", user), so thread count cannot change
/// the output.
inline LatentMatrix sample_latents(const CorrelationMatrix& corr, std::size_t n_users,
                                   const StreamFamily& streams, unsigned threads = 1) {
    if (n_users == 0) throw std::invalid_argument("sample_latents: n_users must be >= 1");
    const Matrix f = cholesky_lower(corr);
    const std::size_t d = corr.dim;
    LatentMatrix out{Matrix(n_users, d)};
    parallel_for(0, n_users, threads, [&](std::size_t u) {
        RngStream rng = streams.stream("latents", u);
        std::vector<double> z(d);
        for (std::size_t j = 0; j < d; ++j) z[j] = std_normal_inv_cdf(rng.next_open01());
        double* row = out.values.row_ptr(u);
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += f(i, j) * z[j];
            row[i] = acc;
        }
    });
    return out;
}

/// Analytic category probabilities: successive differences of the normal
/// CDF at the cutoffs.
inline std::vector<double> bin_probabilities(const OrdinalFeatureSpec& spec) {
    spec.validate();
    std::vector<double> probs(spec.cardinality());
    double lower = 0.0;
    for (std::size_t k = 0; k < spec.cutoffs.size(); ++k) {
        double upper = std_normal_cdf(spec.cutoffs[k]);
        probs[k] = upper - lower;
        lower = upper;
    }
    probs.back() = 1.0 - lower;
    return probs;
}

/// Code k for x in [cutoff_{k-1}, cutoff_k); a value equal to a cutoff
/// lands in the upper bin.
inline int discretize_value(double x, std::span<const double> cutoffs) {
    auto it = std::upper_bound(cutoffs.begin(), cutoffs.end(), x);
    return static_cast<int>(it - cutoffs.begin()) + 1;
}

inline OrdinalCodeColumn discretize(std::span<const double> latent_column,
                                    const OrdinalFeatureSpec& spec) {
    spec.validate();
    OrdinalCodeColumn out{spec.name, std::vector<int>(latent_column.size())};
    for (std::size_t u = 0; u < latent_column.size(); ++u)
        out.codes[u] = discretize_value(latent_column[u], spec.cutoffs);
    return out;
}

}  // namespace recsynth
