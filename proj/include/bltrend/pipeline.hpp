#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "bltrend/config.hpp"
#include "bltrend/judge.hpp"

namespace bltrend {

enum ExitCode : int { kExitOk = 0, kExitPartial = 1, kExitFatal = 2 };

/// Where each command reads and writes, relative to the output directory.
struct OutputLayout {
    std::filesystem::path root;

    std::filesystem::path run_config() const { return root / "run_config.json"; }
    std::filesystem::path data() const { return root / "data"; }
    std::filesystem::path reports() const { return root / "reports"; }
    std::filesystem::path corpus() const { return data() / "corpus.jsonl"; }
    std::filesystem::path sample() const { return data() / "sample.jsonl"; }
    std::filesystem::path assessments() const { return data() / "assessments.jsonl"; }
    std::filesystem::path score_report() const { return data() / "score_report.json"; }
    std::filesystem::path report(std::string_view stem, std::string_view ext) const {
        return reports() / (std::string(stem) + "." + std::string(ext));
    }
};

/// Runs pipeline stages against one resolved configuration. Each stage reads
/// what the previous one wrote under `config.out`, so stages can be run one
/// at a time or chained by `run_all`.
///
///   ingest       corpus file -> data/corpus.jsonl, census report
///   fetch        citation counts into data/corpus.jsonl
///   sample       data/corpus.jsonl -> data/sample.jsonl
///   score        data/sample.jsonl -> data/assessments.jsonl
///   reliability  assessments -> reports/reliability.*
///   regress      assessments + corpus -> reports/table1.*, reports/table2.*
///   report       trends, histograms, census
///
/// Stage methods return an exit code and throw on fatal errors; `run`
/// converts errors into exit code 2 with a message on the error stream.
class Pipeline {
public:
    Pipeline(RunConfig config, std::ostream& out, std::ostream& err, BackendFactory factory = make_backend,
             std::function<std::string()> clock = {});

    int ingest();
    int fetch();
    int sample();
    int score();
    int reliability();
    int regress();
    int report();
    int run_all();

    /// Dispatches by command name ("ingest", ..., "run-all").
    int run(std::string_view command);

    const OutputLayout& layout() const noexcept { return layout_; }
    const RunConfig& config() const noexcept { return config_; }
    /// Statistics from the most recent `score`.
    const JudgeStats& last_judge_stats() const noexcept { return judge_stats_; }

private:
    void write_run_config() const;
    const RubricDefinition& rubric();
    CorpusStore load_stage_corpus(const std::filesystem::path& path, std::string_view producer) const;
    std::vector<Assessment> load_assessments();

    RunConfig config_;
    OutputLayout layout_;
    std::ostream& out_;
    std::ostream& err_;
    BackendFactory factory_;
    std::function<std::string()> clock_;
    std::optional<RubricDefinition> rubric_;
    JudgeStats judge_stats_;
};

}  // namespace bltrend
