#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "recsynth/catalog.hpp"
#include "recsynth/config.hpp"
#include "recsynth/copula.hpp"
#include "recsynth/csv.hpp"
#include "recsynth/matrix.hpp"
#include "recsynth/mnl.hpp"
#include "recsynth/nominal.hpp"
#include "recsynth/parallel.hpp"
#include "recsynth/ratings.hpp"
#include "recsynth/rng.hpp"
#include "recsynth/user_table.hpp"

namespace recsynth {

/// Everything one generation run produces, kept in memory; emit_bundle
/// writes the CSV views.
struct DatasetBundle {
    UserTable users;
    std::vector<UserBehavior> behaviors;
    std::vector<ItemQuality> qualities;  // latent; not part of the emitted items table
    Matrix preferences;                  // n_users x J, rows on the simplex
    Matrix affinity;                     // n_users x n_items, after sparse noise
    SparseRatings ratings;
    BetaMatrix beta_normalized;
};

/// Runs the whole generation sequence. Pure: touches no files, and the
/// result depends only on the spec (worker threads never change draws
/// because every random step runs on substreams keyed by step name and
/// entity index; see StreamFamily).
inline DatasetBundle run_pipeline(const GenerationSpec& spec, unsigned threads = 0) {
    validate_spec(spec);
    threads = resolve_thread_count(threads);
    const StreamFamily streams(spec.seed);
    const std::size_t n = spec.n_users;

    DatasetBundle bundle;
    bundle.users.n_users = n;

    // Correlated latents, then per-feature discretization into codes.
    LatentMatrix latents = sample_latents(spec.correlation, n, streams, threads);
    for (std::size_t f = 0; f < spec.ordinal_features.size(); ++f) {
        const OrdinalFeatureSpec& feature = spec.ordinal_features[f];
        std::vector<double> column(n);
        for (std::size_t u = 0; u < n; ++u) column[u] = latents.values(u, f);
        OrdinalCodeColumn codes = discretize(column, feature);
        std::vector<double> proxy;
        if (feature.continuous_proxy) {
            proxy.resize(n);
            const std::string step = "continuous-proxy:" + feature.name;
            parallel_for(0, n, threads, [&](std::size_t u) {
                RngStream rng = streams.stream(step, u);
                auto [lo, hi] = feature.bin_ranges[static_cast<std::size_t>(codes.codes[u]) - 1];
                proxy[u] = lo + (hi - lo) * rng.next_double();
            });
        }
        bundle.users.add_ordinal(feature, std::move(codes.codes), std::move(proxy));
    }

    // Nominal features in declared order so conditioning sees its inputs.
    for (const NominalFeatureSpec& feature : spec.nominal_features) {
        NominalColumn column = sample_nominal(feature, bundle.users, streams, spec.theta_mode, threads);
        bundle.users.add_nominal(feature.name, feature.categories, std::move(column.codes));
    }

    // Utilities and preference probabilities.
    DesignMatrix design = encode_users(bundle.users);
    bundle.beta_normalized = normalize_beta(spec.beta, spec.ref_preference, spec.tau);
    Matrix utilities = compute_utilities(design, bundle.beta_normalized, streams, true, threads);
    bundle.preferences = preference_probabilities(utilities);

    // Item catalog to affinities, plus the sparse perturbation.
    Matrix icat = vectorize_catalog(spec.catalog, spec.preference_categories);
    bundle.affinity = user_item_affinity(bundle.preferences, icat);
    {
        RngStream rng = streams.stream("affinity-noise");
        bundle.affinity = add_sparse_noise(std::move(bundle.affinity), spec.noise_density, rng);
    }

    // Behaviour traits, item quality, rated-cell selection: sequential
    // single-stream draws by contract.
    {
        RngStream rng = streams.stream("behaviors");
        bundle.behaviors = assign_behaviors(n, rng);
    }
    {
        RngStream rng = streams.stream("qualities");
        bundle.qualities = assign_quality(spec.catalog.size(), rng);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
    {
        RngStream rng = streams.stream("rated-cells");
        cells = select_rated_cells(n, spec.catalog.size(), spec.ratings_density, rng);
    }

    MamdaniFis fis(spec.fuzzy.inputs, spec.fuzzy.output, spec.fuzzy.rules);
    RatingOptions options;
    options.cache = spec.fuzzy.cache;
    options.cache_step = spec.fuzzy.cache_step;
    options.threads = threads;
    bundle.ratings = generate_ratings(bundle.affinity, bundle.behaviors, bundle.qualities, cells,
                                      fis, options);
    return bundle;
}

namespace detail {

inline std::string join_categories(const std::vector<std::string>& categories) {
    std::string out;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        if (i) out += '|';
        out += categories[i];
    }
    return out;
}

}  // namespace detail

/// Writes users.csv, items.csv, preferences.csv, ratings.csv and beta.csv
/// (plus affinity.csv when asked). Formatting is fixed so identical
/// bundles produce byte-identical files.
inline void emit_bundle(const DatasetBundle& bundle, const GenerationSpec& spec,
                        const std::filesystem::path& out_dir, bool emit_affinity = false) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 ec.message());
    const std::size_t n = bundle.users.n_users;

    {
        csv::Writer users((out_dir / "users.csv").string());
        std::vector<std::string> header{"UserID"};
        for (const auto& f : bundle.users.ordinal_features) header.push_back(f);
        for (const auto& f : bundle.users.nominal_features) header.push_back(f);
        header.push_back("bias");
        header.push_back("spread");
        for (std::size_t f = 0; f < bundle.users.ordinal_features.size(); ++f)
            if (!bundle.users.continuous_proxies[f].empty())
                header.push_back(bundle.users.ordinal_features[f] + "_cont");
        users.row(header);
        for (std::size_t u = 0; u < n; ++u) {
            std::vector<std::string> row{std::to_string(u)};
            for (const auto& codes : bundle.users.ordinal_codes)
                row.push_back(std::to_string(codes[u]));
            for (std::size_t f = 0; f < bundle.users.nominal_features.size(); ++f)
                row.push_back(bundle.users.nominal_categories[f]
                                  [static_cast<std::size_t>(bundle.users.nominal_codes[f][u])]);
            row.push_back(csv::format_double(bundle.behaviors[u].bias, 2));
            row.push_back(csv::format_double(bundle.behaviors[u].spread, 2));
            for (std::size_t f = 0; f < bundle.users.ordinal_features.size(); ++f)
                if (!bundle.users.continuous_proxies[f].empty())
                    row.push_back(csv::format_double(bundle.users.continuous_proxies[f][u], 2));
            users.row(row);
        }
        users.close();
    }

    {
        csv::Writer items((out_dir / "items.csv").string());
        items.row({"itemID", "name", "categories"});
        for (const auto& item : spec.catalog.items)
            items.row({std::to_string(item.id), item.name,
                       detail::join_categories(item.categories)});
        items.close();
    }

    {
        csv::Writer prefs((out_dir / "preferences.csv").string());
        std::vector<std::string> header{"UserID"};
        for (const auto& c : spec.preference_categories) header.push_back(c);
        prefs.row(header);
        for (std::size_t u = 0; u < n; ++u) {
            std::string line = std::to_string(u);
            for (std::size_t j = 0; j < bundle.preferences.cols(); ++j) {
                line += ',';
                line += csv::format_double(bundle.preferences(u, j), 12);
            }
            prefs.raw_line(line);
        }
        prefs.close();
    }

    {
        csv::Writer ratings((out_dir / "ratings.csv").string());
        ratings.row({"userId", "itemId", "rating"});
        for (const auto& triple : bundle.ratings.triples) {
            std::string line = std::to_string(triple.user_id);
            line += ',';
            line += std::to_string(triple.item_id);
            line += ',';
            line += csv::format_double(triple.rating, 2);
            ratings.raw_line(line);
        }
        ratings.close();
    }

    {
        csv::Writer beta((out_dir / "beta.csv").string());
        std::vector<std::string> header{""};
        for (const auto& c : bundle.beta_normalized.preference_names) header.push_back(c);
        beta.row(header);
        for (std::size_t r = 0; r < bundle.beta_normalized.values.rows(); ++r) {
            std::vector<std::string> row{bundle.beta_normalized.row_names[r]};
            for (std::size_t c = 0; c < bundle.beta_normalized.values.cols(); ++c) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%g", bundle.beta_normalized.values(r, c));
                row.emplace_back(buf);
            }
            beta.row(row);
        }
        beta.close();
    }

    if (emit_affinity) {
        csv::Writer affinity((out_dir / "affinity.csv").string());
        std::vector<std::string> header{"UserID"};
        for (const auto& item : spec.catalog.items) header.push_back(std::to_string(item.id));
        affinity.row(header);
        for (std::size_t u = 0; u < n; ++u) {
            std::string line = std::to_string(u);
            for (std::size_t i = 0; i < bundle.affinity.cols(); ++i) {
                line += ',';
                line += csv::format_double(bundle.affinity(u, i), 6);
            }
            affinity.raw_line(line);
        }
        affinity.close();
    }
}

}  // namespace recsynth
