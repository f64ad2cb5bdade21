#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cqmine {

// The eleven metrics carried through the research-question analyses,
// in fixed grid order.
enum class AnalysisMetric {
    CommentDensity,        // CD
    CommentedStatements,   // CS
    FunctionCount,         // FN
    FunctionSize,          // FS
    GotoDensity,           // GD
    IdentifierLength,      // IL
    LineLength,            // LL
    LineCount,             // LN
    QuestionableDensity,   // QD
    StyleInconsistency,    // SI
    NestingDepth,          // SN
};

inline constexpr int kAnalysisMetricCount = 11;

// Short display names, grid order: CD CS FN FS GD IL LL LN QD SI SN.
const std::array<std::string, kAnalysisMetricCount>& analysis_metric_names();

// One mined file: per-revision committers and metric values, oldest first.
struct FileSeries {
    std::string repo;
    std::string path;
    std::vector<std::string> committers;  // lowercased committer emails
    std::array<std::vector<double>, kAnalysisMetricCount> values;
};

// Expand timeline path patterns: shell-style globs, literal files, or
// directories (scanned for *.timeline.tsv). Sorted, deduplicated.
// Throws DataError when nothing matches.
std::vector<std::string> resolve_timeline_inputs(const std::vector<std::string>& patterns);

// Parse timeline TSVs (as written by the miner) into per-file series.
// Throws DataError on missing columns or malformed rows.
std::vector<FileSeries> load_timelines(const std::vector<std::string>& paths);

struct Rq1Options {
    int min_commits = 50;   // eligibility: revisions strictly greater than this
    int max_lag = 50;
    double threshold = 0.5;
    double alpha = 0.05;
};

struct Rq1Result {
    int max_lag = 50;
    // Files passing the eligibility filter, per metric.
    std::array<std::uint64_t, kAnalysisMetricCount> eligible{};
    // hits[m][k-1]: eligible files with rho_k > threshold and p_k < alpha.
    std::array<std::vector<std::uint64_t>, kAnalysisMetricCount> hits;
};

Rq1Result rq1(const std::vector<FileSeries>& series, const Rq1Options& options);

struct Rq2Options {
    double q_low = 0.25;
    double q_high = 0.75;
    int min_dev_commits = 10;  // per developer, in each of the two groups
    double alpha = 0.05;
    bool bh_global = false;    // false: BH within each cell; true: pooled
};

struct Rq2Cell {
    std::uint64_t n_developers = 0;   // (project, developer) pairs tested
    std::uint64_t n_significant = 0;  // of those, BH-adjusted p < alpha
};

struct Rq2Result {
    // cells[group_metric][test_metric]
    std::array<std::array<Rq2Cell, kAnalysisMetricCount>, kAnalysisMetricCount> cells{};
};

Rq2Result rq2(const std::vector<FileSeries>& series, const Rq2Options& options);

// Deterministic emitters. Percent cells with an undefined value (no eligible
// files / no tested developers) are left empty, distinguishing absence from
// a true zero.
void write_rq1_csv(const Rq1Result& result, std::ostream& out);
void write_rq2_csv(const Rq2Result& result, std::ostream& out);

// Fixed-dimension SVG charts with the underlying values embedded in
// data-* attributes. The heatmap contains exactly one rect per cell (121).
void write_rq1_svg(const Rq1Result& result, std::ostream& out);
void write_rq2_svg(const Rq2Result& result, std::ostream& out);

}  // namespace cqmine
