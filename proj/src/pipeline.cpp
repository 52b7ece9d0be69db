#include "bltrend/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "bltrend/citations.hpp"
#include "bltrend/digest.hpp"
#include "bltrend/errors.hpp"
#include "bltrend/regression.hpp"
#include "bltrend/report.hpp"

namespace bltrend {

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : std::move(fallback);
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * fraction);
    return buf;
}

}  // namespace

Pipeline::Pipeline(RunConfig config, std::ostream& out, std::ostream& err, BackendFactory factory,
                   std::function<std::string()> clock)
    : config_(std::move(config)),
      layout_{config_.out},
      out_(out),
      err_(err),
      factory_(std::move(factory)),
      clock_(std::move(clock)) {
    config_.validate();
}

void Pipeline::write_run_config() const {
    ordered_json snap = config_.snapshot();
    if (std::filesystem::exists(config_.corpus)) snap["corpus_sha256"] = sha256_hex(read_text_file(config_.corpus));
    write_text_file(layout_.run_config(), snap.dump(2) + "\n");
}

const RubricDefinition& Pipeline::rubric() {
    if (!rubric_) {
        if (config_.rubric.empty()) {
            rubric_.emplace(RubricDefinition::builtin());
        } else {
            rubric_.emplace(RubricDefinition::load(config_.rubric));
        }
    }
    return *rubric_;
}

CorpusStore Pipeline::load_stage_corpus(const std::filesystem::path& path, std::string_view producer) const {
    if (!std::filesystem::exists(path)) {
        throw MissingPrerequisite(path.string() + " not found; run `" + std::string(producer) + "` first",
                                  std::string(producer));
    }
    LoadResult loaded = load_corpus(path);
    if (!loaded.skipped.empty()) {
        throw ValidationError(path.string() + " has " + std::to_string(loaded.skipped.size()) +
                              " malformed lines; rerun `" + std::string(producer) + "`");
    }
    return std::move(loaded.store);
}

std::vector<Assessment> Pipeline::load_assessments() {
    if (!std::filesystem::exists(layout_.assessments())) {
        throw MissingPrerequisite(layout_.assessments().string() + " not found; run `score` first", "score");
    }
    return parse_assessments(read_text_file(layout_.assessments()), rubric());
}

int Pipeline::ingest() {
    write_run_config();
    LoadResult loaded = load_corpus(config_.corpus);
    for (const auto& skip : loaded.skipped) {
        err_ << "ingest: line " << skip.line << " skipped: " << skip.reason << "\n";
    }
    save_corpus(loaded.store, layout_.corpus());
    const auto census = corpus_census(loaded.store);
    write_text_file(layout_.report("census", "csv"), census_csv(census));
    write_text_file(layout_.report("census", "txt"), census_text(census));
    write_text_file(layout_.report("census", "svg"), census_svg(census));
    out_ << "ingest: " << loaded.loaded << " records from " << census.size() << " years, " << loaded.skipped.size()
         << " lines skipped\n";
    return loaded.skipped.empty() ? kExitOk : kExitPartial;
}

int Pipeline::fetch() {
    write_run_config();
    const CorpusStore store = load_stage_corpus(layout_.corpus(), "ingest");
    FetchOptions options;
    options.endpoint = config_.citation_endpoint.empty() ? env_or(kCitationEndpointEnv, kDefaultCitationEndpoint)
                                                         : config_.citation_endpoint;
    options.api_key = env_or(kCitationApiKeyEnv, "");
    options.batch_size = config_.fetch_batch_size;
    options.rate_limit = config_.fetch_rate_limit;
    options.max_retries = config_.fetch_max_retries;
    options.force = config_.force_fetch;
    options.clock = clock_;
    FetchResult result = fetch_citations(store, options);
    save_corpus(result.store, layout_.corpus());
    for (const auto& o : result.report.outcomes) {
        if (o.status == FetchStatus::failed) err_ << "fetch: " << o.id << " failed: " << o.error << "\n";
    }
    out_ << "fetch: " << result.report.fetched << " fetched, " << result.report.skipped << " already present, "
         << result.report.failed << " failed\n";
    return result.report.failed == 0 ? kExitOk : kExitPartial;
}

int Pipeline::sample() {
    write_run_config();
    const CorpusStore store = load_stage_corpus(layout_.corpus(), "ingest");
    if (store.empty()) throw InsufficientData("corpus is empty; nothing to sample");
    const auto census = corpus_census(store);
    SampleSpec spec;
    spec.per_year = config_.per_year;
    spec.seed = config_.seed;
    spec.year_min = config_.year_min.value_or(census.begin()->first);
    spec.year_max = config_.year_max.value_or(census.rbegin()->first);
    const SampleResult result = sample_yearly(store, spec);

    CorpusStore picked;
    for (const auto& r : result.records) picked.insert(r);
    save_corpus(picked, layout_.sample());
    for (int year : result.empty_years) err_ << "sample: no papers for " << year << "\n";
    out_ << "sample: " << result.records.size() << " papers from " << result.selected_per_year.size()
         << " years (seed " << spec.seed << ", up to " << spec.per_year << " per year)\n";
    return kExitOk;
}

int Pipeline::score() {
    write_run_config();
    const CorpusStore sample = load_stage_corpus(layout_.sample(), "sample");
    std::vector<PaperRecord> papers(sample.records().begin(), sample.records().end());
    std::vector<ModelId> models;
    for (const auto& m : config_.models) models.push_back(ModelId::parse(m));

    JudgeConfig jc;
    jc.temperature = config_.temperature;
    jc.max_retries = config_.max_retries;
    jc.parallelism = config_.parallelism;
    jc.timeout = std::chrono::milliseconds(config_.timeout_ms);
    ResponseCache cache(config_.cache_dir);
    Judge judge(rubric(), jc, &cache, factory_);
    const BatchResult batch = judge.score_batch(papers, models);
    judge_stats_ = batch.stats;

    write_text_file(layout_.assessments(), serialize_assessments(batch.assessments));
    ordered_json report;
    report["papers"] = papers.size();
    report["models"] = config_.models;
    report["assessments"] = batch.assessments.size();
    report["failures"] = ordered_json::array();
    for (const auto& f : batch.failures) {
        ordered_json entry;
        entry["paper_id"] = f.paper_id;
        entry["model"] = f.model_id;
        entry["kind"] = f.kind;
        entry["message"] = f.message;
        report["failures"].push_back(std::move(entry));
    }
    write_text_file(layout_.score_report(), report.dump(2) + "\n");

    for (const auto& f : batch.failures) {
        err_ << "score: " << f.paper_id << " x " << f.model_id << ": " << f.kind << ": " << f.message << "\n";
    }
    const JudgeStats& s = batch.stats;
    out_ << "score: " << batch.assessments.size() << " assessments, " << batch.failures.size() << " failures\n";
    out_ << "score: cache hits " << s.cache_hits << "/" << (s.cache_hits + s.cache_misses) << " ("
         << percent(s.hit_rate()) << "), backend calls " << s.backend_calls << ", retries " << s.retries << "\n";
    if (batch.has_config_error()) {
        err_ << "score: configuration error from a judge backend; fix credentials or model ids\n";
        return kExitFatal;
    }
    return batch.failures.empty() ? kExitOk : kExitPartial;
}

int Pipeline::reliability() {
    write_run_config();
    const auto assessments = load_assessments();
    const ReliabilityTable table = per_dimension_reliability(assessments, config_.alpha_metric);
    write_text_file(layout_.report("reliability", "csv"), reliability_csv(table));
    write_text_file(layout_.report("reliability", "txt"), reliability_text(table));
    write_text_file(layout_.report("reliability", "svg"), reliability_svg(table));
    std::size_t degenerate = 0;
    for (const auto& r : table) degenerate += (r.icc.ok() ? 0 : 1) + (r.alpha.ok() ? 0 : 1);
    out_ << "reliability: " << table.size() << " dimensions, " << degenerate << " statistics undefined\n";
    return kExitOk;
}

int Pipeline::regress() {
    write_run_config();
    const auto assessments = load_assessments();
    const CorpusStore store = load_stage_corpus(layout_.corpus(), "ingest");
    RegressionOptions options;
    options.standardize = config_.standardize;
    options.allow_mixed_snapshots = config_.allow_mixed_snapshots;
    const StratifiedResults dims = per_dimension_regressions(assessments, store, options);
    const StratifiedResults overall = overall_regression(assessments, store, options);
    render_regression_tables(dims, TableStyle::table1, layout_.report("table1", "csv"),
                             layout_.report("table1", "txt"));
    render_regression_tables(overall, TableStyle::table2, layout_.report("table2", "csv"),
                             layout_.report("table2", "txt"));
    for (const auto& [year, why] : dims.skipped) err_ << "regress: table1 " << year << " skipped: " << why << "\n";
    for (const auto& [year, why] : overall.skipped) err_ << "regress: table2 " << year << " skipped: " << why << "\n";
    if (dims.papers_without_citations > 0) {
        err_ << "regress: " << dims.papers_without_citations << " scored papers lack citation counts; run `fetch`\n";
    }
    if (dims.papers_not_in_corpus > 0) {
        err_ << "regress: " << dims.papers_not_in_corpus << " scored papers are missing from the corpus\n";
    }
    out_ << "regress: table1 " << dims.by_year.size() << " years fit, table2 " << overall.by_year.size()
         << " years fit\n";
    return dims.by_year.empty() && overall.by_year.empty() ? kExitPartial : kExitOk;
}

int Pipeline::report() {
    write_run_config();
    const auto assessments = load_assessments();
    const CorpusStore corpus = load_stage_corpus(layout_.corpus(), "ingest");
    const CorpusStore sample = load_stage_corpus(layout_.sample(), "sample");
    int code = kExitOk;

    std::vector<Annotation> annotations;
    if (!config_.annotations.empty()) annotations = load_annotations(config_.annotations);
    const TrendSeries series = trend_series(assessments);
    write_text_file(layout_.report("trends", "csv"), trends_csv(series));
    write_text_file(layout_.report("trends", "txt"), trends_text(series));
    if (!series.empty()) {
        render_line_plot(series, annotations, layout_.report("trends", "svg"));
    } else {
        err_ << "report: no assessments; trend plot not drawn\n";
        code = kExitPartial;
    }

    const auto census = corpus_census(corpus);
    write_text_file(layout_.report("census", "csv"), census_csv(census));
    write_text_file(layout_.report("census", "txt"), census_text(census));
    write_text_file(layout_.report("census", "svg"), census_svg(census));

    std::vector<std::int64_t> counts;
    for (const auto& r : sample.records()) {
        const PaperRecord* current = corpus.find(r.id);
        if (current && current->citation_count) counts.push_back(*current->citation_count);
    }
    if (!counts.empty()) {
        const HistogramPair pair = render_histograms(counts, layout_.report("histograms", "svg"),
                                                     layout_.report("histograms_log", "svg"), config_.histogram_bins);
        write_text_file(layout_.report("histograms", "csv"), histograms_csv(pair));
        write_text_file(layout_.report("histograms", "txt"), histograms_text(pair));
    } else {
        err_ << "report: no sampled paper has a citation count; histograms not drawn (run `fetch`)\n";
        code = kExitPartial;
    }
    out_ << "report: trends for " << assessments.size() << " assessments, histograms over " << counts.size()
         << " papers\n";
    return code;
}

int Pipeline::run_all() {
    int worst = kExitOk;
    for (auto stage : {&Pipeline::ingest, &Pipeline::fetch, &Pipeline::sample, &Pipeline::score,
                       &Pipeline::reliability, &Pipeline::regress, &Pipeline::report}) {
        const int code = (this->*stage)();
        worst = std::max(worst, code);
        if (code == kExitFatal) break;
    }
    return worst;
}

int Pipeline::run(std::string_view command) {
    try {
        if (command == "ingest") return ingest();
        if (command == "fetch") return fetch();
        if (command == "sample") return sample();
        if (command == "score") return score();
        if (command == "reliability") return reliability();
        if (command == "regress") return regress();
        if (command == "report") return report();
        if (command == "run-all") return run_all();
        err_ << "error: unknown command '" << command << "'\n";
        return kExitFatal;
    } catch (const MissingPrerequisite& e) {
        err_ << "error: " << e.what() << "\n";
        return kExitFatal;
    } catch (const Error& e) {
        err_ << "error: " << e.kind() << ": " << e.what() << "\n";
        return kExitFatal;
    } catch (const std::exception& e) {
        err_ << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

}  // namespace bltrend
