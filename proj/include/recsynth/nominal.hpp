#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "recsynth/parallel.hpp"
#include "recsynth/rng.hpp"
#include "recsynth/stats.hpp"
#include "recsynth/user_table.hpp"

namespace recsynth {

/// Whether the Dirichlet prior is drawn fresh for every user or once per
/// (feature, conditioning value) and shared across users.
enum class ThetaMode { per_user, per_run };

/// Nominal feature with a Dirichlet prior; the prior may depend on the
/// value of one already-generated feature (e.g. occupation conditioned on
/// education).
struct NominalFeatureSpec {
    std::string name;
    std::vector<std::string> categories;
    std::vector<double> alpha;  // unconditional prior; empty when conditional
    std::string conditioned_on;  // empty when unconditional
    std::map<std::string, std::vector<double>> alpha_by;  // conditioning label -> prior

    bool conditional() const { return !conditioned_on.empty(); }

    void validate() const {
        if (categories.size() < 2)
            throw std::invalid_argument("nominal feature '" + name + "': needs at least 2 categories");
        auto check_alpha = [&](const std::vector<double>& a, const std::string& where) {
            if (a.size() != categories.size())
                throw std::invalid_argument("nominal feature '" + name + "': " + where +
                                            " has " + std::to_string(a.size()) +
                                            " entries, expected " + std::to_string(categories.size()));
            for (double v : a)
                if (!(v > 0.0))
                    throw std::invalid_argument("nominal feature '" + name + "': " + where +
                                                " must be strictly positive");
        };
        if (conditional()) {
            if (alpha_by.empty())
                throw std::invalid_argument("nominal feature '" + name +
                                            "': conditional prior table is empty");
            for (const auto& [label, a] : alpha_by) check_alpha(a, "prior for '" + label + "'");
        } else {
            check_alpha(alpha, "alpha");
        }
    }
};

struct NominalColumn {
    std::string feature;
    std::vector<int> codes;  // 0-based index into spec.categories
};

/// Prior vector for one user: the unconditional alpha, or the row selected
/// by the user's conditioning value.
inline const std::vector<double>& resolve_alphas(const NominalFeatureSpec& spec,
                                                 const UserTable& users, std::size_t u) {
    if (!spec.conditional()) return spec.alpha;
    auto label = users.label_of(spec.conditioned_on, u);
    if (!label)
        throw std::runtime_error("nominal feature '" + spec.name + "': conditioning feature '" +
                                 spec.conditioned_on + "' has not been generated");
    auto it = spec.alpha_by.find(*label);
    if (it == spec.alpha_by.end())
        throw std::runtime_error("nominal feature '" + spec.name + "': no prior row for '" +
                                 spec.conditioned_on + "' = '" + *label + "'");
    return it->second;
}

/// Draws one label per user: theta ~ Dirichlet(alpha), label ~ Cat(theta).
/// In per_run mode a single theta per conditioning row is shared by all
/// users; each user still owns the categorical draw.
inline NominalColumn sample_nominal(const NominalFeatureSpec& spec, const UserTable& users,
                                    const StreamFamily& streams, ThetaMode mode = ThetaMode::per_user,
                                    unsigned threads = 1) {
    spec.validate();
    const std::size_t n = users.n_users;
    NominalColumn out{spec.name, std::vector<int>(n)};
    const std::string step = "nominal:" + spec.name;

    if (mode == ThetaMode::per_run) {
        // One theta per distinct prior row, drawn on a row-indexed stream.
        std::map<const std::vector<double>*, std::vector<double>> shared;
        if (spec.conditional()) {
            std::uint64_t row = 0;
            for (const auto& [label, a] : spec.alpha_by) {
                RngStream rng = streams.stream(step + ":theta", row++);
                shared.emplace(&a, dirichlet_sample(a, rng));
            }
        } else {
            RngStream rng = streams.stream(step + ":theta", 0);
            shared.emplace(&spec.alpha, dirichlet_sample(spec.alpha, rng));
        }
        parallel_for(0, n, threads, [&](std::size_t u) {
            const auto& alpha = resolve_alphas(spec, users, u);
            RngStream rng = streams.stream(step, u);
            out.codes[u] = static_cast<int>(categorical_sample(shared.at(&alpha), rng));
        });
        return out;
    }

    parallel_for(0, n, threads, [&](std::size_t u) {
        const auto& alpha = resolve_alphas(spec, users, u);
        RngStream rng = streams.stream(step, u);
        std::vector<double> theta = dirichlet_sample(alpha, rng);
        out.codes[u] = static_cast<int>(categorical_sample(theta, rng));
    });
    return out;
}

}  // namespace recsynth
