#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "recsynth/analysis.hpp"
#include "recsynth/config.hpp"
#include "recsynth/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"recsynth: seedable synthetic recommender-dataset generator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string in_dir;
    std::uint64_t seed = 0;
    std::size_t n_users = 0;
    unsigned threads = 0;
    bool emit_affinity = false;
    bool have_seed = false;
    bool have_n_users = false;

    CLI::App* generate = app.add_subcommand("generate", "run the full generation sequence");
    generate->add_option("--config", config_path, "TOML generation config")
        ->required()
        ->check(CLI::ExistingFile);
    generate->add_option("--seed", seed, "override the configured seed")
        ->each([&](const std::string&) { have_seed = true; });
    generate->add_option("--n-users", n_users, "override the configured user count")
        ->each([&](const std::string&) { have_n_users = true; });
    generate->add_option("--out", out_dir, "output directory (default: out)");
    generate->add_option("--threads", threads, "worker threads (default: RECSYNTH_THREADS or hardware)");
    generate->add_flag("--emit-affinity", emit_affinity, "also write the dense affinity matrix");

    CLI::App* stats = app.add_subcommand("stats", "descriptive statistics of an emitted dataset");
    stats->add_option("--in", in_dir, "dataset directory")->required()->check(CLI::ExistingDirectory);
    stats->add_option("--config", config_path, "optional config, enables the latent correlation report")
        ->check(CLI::ExistingFile);

    CLI::App* validate = app.add_subcommand("validate", "check an emitted dataset against its config");
    validate->add_option("--in", in_dir, "dataset directory")->required()->check(CLI::ExistingDirectory);
    validate->add_option("--config", config_path, "generation config the dataset claims to follow")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            recsynth::GenerationSpec spec = recsynth::load_and_validate_config(config_path);
            if (have_seed) spec.seed = seed;
            if (have_n_users) spec.n_users = n_users;
            recsynth::validate_spec(spec);
            recsynth::DatasetBundle bundle = recsynth::run_pipeline(spec, threads);
            recsynth::emit_bundle(bundle, spec, out_dir,
                                  emit_affinity || spec.output.emit_affinity);
            const double cells = static_cast<double>(spec.n_users) *
                                 static_cast<double>(spec.catalog.size());
            std::cout << "wrote " << out_dir << ": " << spec.n_users << " users, "
                      << spec.catalog.size() << " items, " << bundle.ratings.triples.size()
                      << " ratings (density "
                      << recsynth::csv::format_double(
                             static_cast<double>(bundle.ratings.triples.size()) / cells, 4)
                      << ")\n";
            return 0;
        }
        if (stats->parsed()) {
            recsynth::GenerationSpec spec;
            const recsynth::GenerationSpec* spec_ptr = nullptr;
            if (!config_path.empty()) {
                spec = recsynth::load_and_validate_config(config_path);
                spec_ptr = &spec;
            }
            std::cout << recsynth::compute_stats(in_dir, spec_ptr).to_string();
            return 0;
        }
        if (validate->parsed()) {
            recsynth::GenerationSpec spec = recsynth::load_and_validate_config(config_path);
            recsynth::ValidationReport report = recsynth::validate_bundle(in_dir, spec);
            std::cout << report.to_string();
            return report.all_pass() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
