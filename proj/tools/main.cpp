// bltrend: command-line driver for the corpus -> judge -> statistics pipeline.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bltrend/config.hpp"
#include "bltrend/errors.hpp"
#include "bltrend/pipeline.hpp"
#include "bltrend/rubric.hpp"
#include "bltrend/synth.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> corpus, cache_dir, out, rubric, annotations, endpoint, alpha_metric, models;
    std::optional<std::uint64_t> seed;
    std::optional<int> per_year, year_min, year_max, parallelism, max_retries, batch_size;
    std::optional<double> rate_limit, temperature;
    bool standardize = false;
    bool force_fetch = false;
    bool allow_mixed = false;
};

std::vector<std::string> split_models(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bltrend::RunConfig resolve(const Overrides& o) {
    const auto cwd = std::filesystem::current_path();
    bltrend::RunConfig c = o.config.empty() ? bltrend::RunConfig{} : bltrend::RunConfig::load(o.config);
    if (o.config.empty()) c.resolve_paths(cwd);
    auto path = [&](const std::optional<std::string>& v, std::filesystem::path& target) {
        if (v) target = v->empty() ? std::filesystem::path{} : (cwd / *v).lexically_normal();
    };
    path(o.corpus, c.corpus);
    path(o.cache_dir, c.cache_dir);
    path(o.out, c.out);
    path(o.rubric, c.rubric);
    path(o.annotations, c.annotations);
    if (o.endpoint) c.citation_endpoint = *o.endpoint;
    if (o.alpha_metric) c.alpha_metric = bltrend::alpha_metric_from_string(*o.alpha_metric);
    if (o.models) c.models = split_models(*o.models);
    if (o.seed) c.seed = *o.seed;
    if (o.per_year) c.per_year = *o.per_year;
    if (o.year_min) c.year_min = *o.year_min;
    if (o.year_max) c.year_max = *o.year_max;
    if (o.parallelism) c.parallelism = *o.parallelism;
    if (o.max_retries) c.max_retries = *o.max_retries;
    if (o.batch_size) c.fetch_batch_size = static_cast<std::size_t>(*o.batch_size);
    if (o.rate_limit) c.fetch_rate_limit = *o.rate_limit;
    if (o.temperature) c.temperature = *o.temperature;
    if (o.standardize) c.standardize = true;
    if (o.force_fetch) c.force_fetch = true;
    if (o.allow_mixed) c.allow_mixed_snapshots = true;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Score papers against a rubric with LLM judges and relate the scores to citations."};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config, "JSON run configuration; flags override it");
    app.add_option("--corpus", o.corpus, "Line-delimited JSON corpus to ingest");
    app.add_option("--cache-dir", o.cache_dir, "Judge response cache directory");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--rubric", o.rubric, "Rubric JSON (default: built-in)");
    app.add_option("--annotations", o.annotations, "JSON list of {year, label} trend-plot markers");
    app.add_option("--seed", o.seed, "Sampling seed");
    app.add_option("--per-year", o.per_year, "Papers sampled per year");
    app.add_option("--year-min", o.year_min, "First year to sample");
    app.add_option("--year-max", o.year_max, "Last year to sample");
    app.add_option("--models", o.models, "Comma-separated provider:model ids");
    app.add_option("--parallelism", o.parallelism, "Concurrent judge requests");
    app.add_option("--max-retries", o.max_retries, "Retries per rejected judge answer");
    app.add_option("--temperature", o.temperature, "Judge sampling temperature");
    app.add_option("--alpha-metric", o.alpha_metric, "Krippendorff alpha distance")
        ->check(CLI::IsMember({"interval", "ordinal", "nominal", "ratio"}));
    app.add_flag("--standardize", o.standardize, "z-score predictors within each year");
    app.add_flag("--force-fetch", o.force_fetch, "Refetch citation counts already present");
    app.add_flag("--allow-mixed-snapshots", o.allow_mixed, "Allow citation counts from different fetch dates");
    app.add_option("--endpoint", o.endpoint, "Citation API base URL");
    app.add_option("--batch-size", o.batch_size, "Citation lookups per batch");
    app.add_option("--rate-limit", o.rate_limit, "Citation requests per second");

    const std::vector<std::pair<std::string, std::string>> stages = {
        {"ingest", "Validate the corpus and copy it into the output directory"},
        {"fetch", "Fill in citation counts"},
        {"sample", "Draw the per-year sample"},
        {"score", "Score sampled papers with every judge model"},
        {"reliability", "Inter-rater reliability per dimension"},
        {"regress", "Per-year regressions of log citations on scores"},
        {"report", "Trend, histogram and census reports"},
        {"run-all", "Every stage in order"},
    };
    std::vector<CLI::App*> stage_cmds;
    for (const auto& [name, help] : stages) stage_cmds.push_back(app.add_subcommand(name, help));

    auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
    std::string synth_path;
    synth->add_option("output", synth_path, "Corpus file to write")->required();

    auto* rubric_dump = app.add_subcommand("rubric-dump", "Print the rubric and the response schema");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            bltrend::SynthSpec spec;
            if (o.seed) spec.seed = *o.seed;
            if (o.per_year) spec.per_year = *o.per_year;
            if (o.year_min) spec.year_min = *o.year_min;
            if (o.year_max) spec.year_max = *o.year_max;
            bltrend::save_corpus(bltrend::synthesize_corpus(spec), synth_path);
            std::cout << "synth: wrote " << synth_path << "\n";
            return bltrend::kExitOk;
        }
        if (rubric_dump->parsed()) {
            const auto rubric = o.rubric ? bltrend::RubricDefinition::load(*o.rubric) : bltrend::RubricDefinition::builtin();
            bltrend::ordered_json doc;
            doc["rubric"] = rubric.to_json();
            doc["response_schema"] = bltrend::response_schema(rubric);
            std::cout << doc.dump(2) << "\n";
            return bltrend::kExitOk;
        }
        bltrend::Pipeline pipeline(resolve(o), std::cout, std::cerr);
        for (auto* cmd : stage_cmds) {
            if (cmd->parsed()) return pipeline.run(cmd->get_name());
        }
    } catch (const bltrend::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return bltrend::kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bltrend::kExitFatal;
    }
    return bltrend::kExitFatal;
}
