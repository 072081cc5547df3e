#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recsynth/config.hpp"
#include "recsynth/copula.hpp"
#include "recsynth/csv.hpp"
#include "recsynth/pipeline.hpp"

namespace recsynth {

namespace detail {

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace detail

/// File-level view of one emitted dataset directory.
struct BundleView {
    std::size_t n_users = 0;
    std::size_t n_items = 0;
    csv::Table users;
    csv::Table items;
    std::vector<RatingTriple> ratings;
    csv::Table preferences;  // kept as strings; parsed on demand
};

inline BundleView read_bundle(const std::filesystem::path& dir) {
    BundleView view;
    view.users = csv::read_file((dir / "users.csv").string());
    view.items = csv::read_file((dir / "items.csv").string());
    view.preferences = csv::read_file((dir / "preferences.csv").string());
    csv::Table ratings = csv::read_file((dir / "ratings.csv").string());
    view.n_users = view.users.rows.size();
    view.n_items = view.items.rows.size();
    view.ratings.reserve(ratings.rows.size());
    for (const auto& row : ratings.rows) {
        if (row.size() != 3) throw std::runtime_error("ratings.csv: malformed row");
        view.ratings.push_back({static_cast<std::uint32_t>(std::stoul(row[0])),
                                static_cast<std::uint32_t>(std::stoul(row[1])),
                                std::stod(row[2])});
    }
    return view;
}

struct StatsReport {
    std::size_t n_users = 0;
    std::size_t n_items = 0;
    std::size_t n_ratings = 0;
    double density = 0.0;
    double mean = 0.0, min = 0.0, max = 0.0;
    std::array<std::size_t, 20> histogram{};  // over [1, 5]
    std::vector<std::pair<std::string, std::map<std::string, std::size_t>>> category_counts;
    std::vector<std::string> ordinal_names;
    Matrix code_correlation;                   // Pearson over ordinal codes
    std::optional<Matrix> latent_correlation;  // when a config is supplied

    std::string to_string() const {
        std::ostringstream out;
        out << "users: " << n_users << "  items: " << n_items << "  ratings: " << n_ratings
            << "\n";
        out << "density: " << csv::format_double(density, 4) << "\n";
        if (n_ratings > 0) {
            out << "rating mean: " << csv::format_double(mean, 4)
                << "  min: " << csv::format_double(min, 4)
                << "  max: " << csv::format_double(max, 4) << "\n";
        } else {
            out << "rating mean: n/a (no ratings)\n";
        }
        out << "histogram [1,5] in 20 bins:\n";
        for (std::size_t b = 0; b < histogram.size(); ++b) {
            double lo = 1.0 + 0.2 * static_cast<double>(b);
            out << "  " << csv::format_double(lo, 1) << "-" << csv::format_double(lo + 0.2, 1)
                << ": " << histogram[b] << "\n";
        }
        for (const auto& [feature, counts] : category_counts) {
            out << feature << ":";
            for (const auto& [label, count] : counts)
                out << "  " << label << "=" << csv::format_double(
                       n_users ? static_cast<double>(count) / static_cast<double>(n_users) : 0.0, 4);
            out << "\n";
        }
        auto print_matrix = [&](const Matrix& m, const std::string& title) {
            out << title << "\n";
            for (std::size_t i = 0; i < m.rows(); ++i) {
                out << " ";
                for (std::size_t j = 0; j < m.cols(); ++j)
                    out << " " << csv::format_double(m(i, j), 3);
                out << "\n";
            }
        };
        if (code_correlation.rows() > 0)
            print_matrix(code_correlation, "ordinal code Pearson correlation:");
        if (latent_correlation)
            print_matrix(*latent_correlation, "latent Pearson correlation (regenerated from config):");
        return out.str();
    }
};

/// Descriptive statistics of an emitted dataset. With a config the latent
/// matrix is regenerated from the configured seed to report the
/// correlation actually realized underneath the ordinal codes.
inline StatsReport compute_stats(const std::filesystem::path& dir,
                                 const GenerationSpec* spec = nullptr) {
    BundleView view = read_bundle(dir);
    StatsReport report;
    report.n_users = view.n_users;
    report.n_items = view.n_items;
    report.n_ratings = view.ratings.size();
    const double cells = static_cast<double>(view.n_users) * static_cast<double>(view.n_items);
    report.density = cells > 0 ? static_cast<double>(report.n_ratings) / cells : 0.0;

    if (!view.ratings.empty()) {
        double total = 0;
        report.min = view.ratings.front().rating;
        report.max = report.min;
        for (const auto& r : view.ratings) {
            total += r.rating;
            report.min = std::min(report.min, r.rating);
            report.max = std::max(report.max, r.rating);
            int bin = static_cast<int>(std::floor((r.rating - 1.0) / 0.2));
            bin = std::clamp(bin, 0, 19);
            ++report.histogram[static_cast<std::size_t>(bin)];
        }
        report.mean = total / static_cast<double>(view.ratings.size());
    }

    // Category frequencies for every non-id, non-behaviour column.
    for (std::size_t c = 1; c < view.users.header.size(); ++c) {
        const std::string& name = view.users.header[c];
        if (name == "bias" || name == "spread" || name.ends_with("_cont")) continue;
        std::map<std::string, std::size_t> counts;
        for (const auto& row : view.users.rows) ++counts[row[c]];
        report.category_counts.emplace_back(name, std::move(counts));
    }

    // Ordinal codes are the leading integer-valued columns.
    std::vector<std::vector<double>> code_columns;
    for (std::size_t c = 1; c < view.users.header.size(); ++c) {
        bool numeric_codes = !view.users.rows.empty();
        std::vector<double> column;
        column.reserve(view.users.rows.size());
        for (const auto& row : view.users.rows) {
            const std::string& cell = row[c];
            if (cell.empty() ||
                cell.find_first_not_of("0123456789") != std::string::npos) {
                numeric_codes = false;
                break;
            }
            column.push_back(std::stod(cell));
        }
        if (!numeric_codes) break;
        report.ordinal_names.push_back(view.users.header[c]);
        code_columns.push_back(std::move(column));
    }
    report.code_correlation = Matrix(code_columns.size(), code_columns.size());
    for (std::size_t i = 0; i < code_columns.size(); ++i) {
        report.code_correlation(i, i) = 1.0;
        for (std::size_t j = i + 1; j < code_columns.size(); ++j) {
            double r = detail::pearson(code_columns[i], code_columns[j]);
            report.code_correlation(i, j) = r;
            report.code_correlation(j, i) = r;
        }
    }

    if (spec && view.n_users > 0) {
        LatentMatrix latents =
            sample_latents(spec->correlation, view.n_users, StreamFamily(spec->seed),
                           resolve_thread_count());
        Matrix corr(latents.dim(), latents.dim());
        std::vector<std::vector<double>> cols(latents.dim());
        for (std::size_t f = 0; f < latents.dim(); ++f) {
            cols[f].resize(view.n_users);
            for (std::size_t u = 0; u < view.n_users; ++u) cols[f][u] = latents.values(u, f);
        }
        for (std::size_t i = 0; i < latents.dim(); ++i) {
            corr(i, i) = 1.0;
            for (std::size_t j = i + 1; j < latents.dim(); ++j) {
                double r = detail::pearson(cols[i], cols[j]);
                corr(i, j) = r;
                corr(j, i) = r;
            }
        }
        report.latent_correlation = std::move(corr);
    }
    return report;
}

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    std::string to_string() const {
        std::ostringstream out;
        for (const auto& c : checks)
            out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail << "\n";
        return out.str();
    }
};

/// Statistical validation of an emitted dataset against its spec.
/// Tolerances are stated for the 100k-user reference scale and widen with
/// 1/sqrt(n) below it.
inline ValidationReport validate_bundle(const std::filesystem::path& dir,
                                        const GenerationSpec& spec) {
    BundleView view = read_bundle(dir);
    ValidationReport report;
    const std::size_t n = view.n_users;
    const double scale = n > 0 ? std::sqrt(100000.0 / static_cast<double>(n)) : 1.0;

    // (a) latent correlations, via deterministic regeneration from the
    // configured seed; also confirms the files came from this config.
    {
        ValidationCheck check{"latent correlations vs configured matrix", true, ""};
        const double tol = 0.015 * std::max(1.0, scale);
        LatentMatrix latents =
            sample_latents(spec.correlation, n, StreamFamily(spec.seed), resolve_thread_count());
        std::vector<std::vector<double>> cols(latents.dim(), std::vector<double>(n));
        for (std::size_t f = 0; f < latents.dim(); ++f)
            for (std::size_t u = 0; u < n; ++u) cols[f][u] = latents.values(u, f);
        double worst = 0.0;
        for (std::size_t i = 0; i < latents.dim(); ++i) {
            for (std::size_t j = i + 1; j < latents.dim(); ++j) {
                double dev = std::fabs(detail::pearson(cols[i], cols[j]) - spec.correlation(i, j));
                worst = std::max(worst, dev);
            }
        }
        // Codes in the file must match what the seed regenerates.
        std::size_t mismatches = 0;
        for (std::size_t f = 0; f < spec.ordinal_features.size(); ++f) {
            std::size_t col = view.users.column(spec.ordinal_features[f].name);
            for (std::size_t u = 0; u < n; ++u) {
                int expected = discretize_value(latents.values(u, f), spec.ordinal_features[f].cutoffs);
                if (std::to_string(expected) != view.users.rows[u][col]) ++mismatches;
            }
        }
        check.pass = worst <= tol && mismatches == 0;
        check.detail = "max deviation " + csv::format_double(worst, 4) + " (tol " +
                       csv::format_double(tol, 4) + ")" +
                       (mismatches ? ", " + std::to_string(mismatches) + " codes do not match the seed"
                                   : "");
        report.checks.push_back(std::move(check));
    }

    // (b) ordinal category frequencies vs the analytic bin probabilities.
    for (const auto& feature : spec.ordinal_features) {
        ValidationCheck check{"ordinal frequencies: " + feature.name, true, ""};
        const double tol = 0.006 * std::max(1.0, scale);
        std::vector<double> expected = bin_probabilities(feature);
        std::vector<std::size_t> counts(expected.size(), 0);
        std::size_t col = view.users.column(feature.name);
        bool parse_ok = true;
        for (const auto& row : view.users.rows) {
            int code = std::atoi(row[col].c_str());
            if (code < 1 || static_cast<std::size_t>(code) > counts.size()) {
                parse_ok = false;
                break;
            }
            ++counts[static_cast<std::size_t>(code) - 1];
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < expected.size(); ++k)
            worst = std::max(worst, std::fabs(static_cast<double>(counts[k]) /
                                                  static_cast<double>(n) - expected[k]));
        check.pass = parse_ok && worst <= tol;
        check.detail = parse_ok
                           ? "max deviation " + csv::format_double(worst, 4) + " (tol " +
                                 csv::format_double(tol, 4) + ")"
                           : "codes out of range";
        report.checks.push_back(std::move(check));
    }

    // (c) nominal frequencies vs alpha / sum(alpha), per conditioning cell
    // when the prior is conditional (cells with fewer than 1000 users are
    // too small to test and are skipped).
    for (const auto& feature : spec.nominal_features) {
        ValidationCheck check{"nominal frequencies: " + feature.name, true, ""};
        std::size_t col = view.users.column(feature.name);
        double worst_sigma = 0.0;
        auto test_cell = [&](const std::vector<double>& alpha,
                             const std::vector<std::size_t>& user_rows) {
            if (user_rows.size() < 1000) return;
            double total_alpha = 0;
            for (double a : alpha) total_alpha += a;
            std::map<std::string, std::size_t> counts;
            for (std::size_t u : user_rows) ++counts[view.users.rows[u][col]];
            for (std::size_t k = 0; k < feature.categories.size(); ++k) {
                double p = alpha[k] / total_alpha;
                double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(user_rows.size()));
                if (sigma == 0.0) continue;
                double freq = static_cast<double>(counts[feature.categories[k]]) /
                              static_cast<double>(user_rows.size());
                worst_sigma = std::max(worst_sigma, std::fabs(freq - p) / sigma);
            }
        };
        if (feature.conditional()) {
            std::size_t cond_col = view.users.column(feature.conditioned_on);
            // Resolve codes to labels for ordinal conditioning columns.
            const OrdinalFeatureSpec* ord = nullptr;
            for (const auto& o : spec.ordinal_features)
                if (o.name == feature.conditioned_on) ord = &o;
            std::map<std::string, std::vector<std::size_t>> cells;
            for (std::size_t u = 0; u < n; ++u) {
                std::string value = view.users.rows[u][cond_col];
                if (ord) value = ord->labels[static_cast<std::size_t>(std::atoi(value.c_str())) - 1];
                cells[value].push_back(u);
            }
            for (const auto& [label, rows] : cells) test_cell(feature.alpha_by.at(label), rows);
        } else {
            std::vector<std::size_t> all(n);
            for (std::size_t u = 0; u < n; ++u) all[u] = u;
            test_cell(feature.alpha, all);
        }
        check.pass = worst_sigma <= 4.0;
        check.detail = "max deviation " + csv::format_double(worst_sigma, 2) + " sigma (tol 4)";
        report.checks.push_back(std::move(check));
    }

    // (d) preference rows on the simplex.
    {
        ValidationCheck check{"preference rows sum to 1", true, ""};
        double worst = 0.0;
        for (const auto& row : view.preferences.rows) {
            double total = 0.0;
            for (std::size_t c = 1; c < row.size(); ++c) total += std::stod(row[c]);
            worst = std::max(worst, std::fabs(total - 1.0));
        }
        check.pass = worst <= 1e-9;
        check.detail = "max |row sum - 1| = " + csv::format_double(worst * 1e12, 3) + "e-12";
        report.checks.push_back(std::move(check));
    }

    // (e) rating envelope, exact density and referential integrity.
    {
        ValidationCheck check{"ratings envelope and density", true, ""};
        const std::uint64_t cells = static_cast<std::uint64_t>(n) * view.n_items;
        const std::uint64_t expected = static_cast<std::uint64_t>(
            std::llround(spec.ratings_density * static_cast<double>(cells)));
        bool in_range = true, ids_ok = true;
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        for (const auto& r : view.ratings) {
            if (!(r.rating > 1.0 && r.rating < 5.0)) in_range = false;
            if (r.user_id >= n || r.item_id >= view.n_items) ids_ok = false;
            seen.insert({r.user_id, r.item_id});
        }
        const bool count_ok = view.ratings.size() == expected && seen.size() == view.ratings.size();
        check.pass = in_range && ids_ok && count_ok;
        check.detail = std::to_string(view.ratings.size()) + " ratings (expected " +
                       std::to_string(expected) + ")" + (in_range ? "" : ", values outside (1,5)") +
                       (ids_ok ? "" : ", dangling ids");
        report.checks.push_back(std::move(check));
    }

    return report;
}

}  // namespace recsynth
