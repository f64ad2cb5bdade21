#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cqmine {

// ---------------------------------------------------------------------------
// Stratified sampling plan
// ---------------------------------------------------------------------------

// Number of qualifying projects in one engagement decade. Stratum `index` i
// covers engagement counts 10^i+1 .. 10^(i+1) (i=1 -> 11..100).
struct StratumCount {
    int index = 0;
    long long projects = 0;
};

struct StratumPlan {
    int index = 0;
    long long projects = 0;
    // Estimated total engagements: projects * (10^i + 10^(i+1)) / 2, exact
    // (the midpoint is half-integral only for i=0, hence a double).
    double total_engagements = 0.0;
    long long n_select = 0;
};

// Allocate `n_target` samples across strata proportionally to estimated
// total engagements. Each raw share S*T_i is rounded half-to-even, then a
// largest-remainder correction enforces sum(n_select) == n_target exactly:
// deficits bump the rounded-down entries with the largest remainders
// (ties: lower stratum first), surpluses decrement the rounded-up entries
// with the smallest remainders (ties: higher stratum first).
// Throws DataError when every stratum is empty.
std::vector<StratumPlan> plan_strata(const std::vector<StratumCount>& counts,
                                     long long n_target);

// ---------------------------------------------------------------------------
// Inclusion criteria
// ---------------------------------------------------------------------------

enum class Verdict { Pass, Fail, Indeterminate };

std::string verdict_name(Verdict v);

// Evidence about one candidate repository. Absent fields yield indeterminate
// verdicts (insufficient evidence is not failure).
struct RepoDescriptor {
    std::string name;
    std::optional<long long> stars;
    std::optional<long long> forks;
    std::optional<std::string> language;
    // Commits per half-year interval, most recent first, anchored at the
    // query date. Only the first kRequiredIntervals entries are examined.
    std::vector<long long> half_year_commits;
};

inline constexpr int kRequiredIntervals = 20;  // ten years of half-year windows

struct InclusionReport {
    Verdict popularity = Verdict::Indeterminate;  // stars or forks > 10
    Verdict language = Verdict::Indeterminate;    // matches the target language
    Verdict continuity = Verdict::Indeterminate;  // no empty half-year interval
    std::vector<std::string> reasons;

    // Pass only when all three pass; any fail dominates indeterminate.
    Verdict overall() const;
};

InclusionReport check_inclusion(const RepoDescriptor& repo,
                                const std::string& required_language);

// ---------------------------------------------------------------------------
// Repository-catalog client
// ---------------------------------------------------------------------------

struct CatalogOptions {
    std::string base_url = "https://api.github.com";
    std::string cache_dir;  // raw response bodies; empty disables caching
    bool offline = false;   // serve exclusively from the cache
    int max_retries = 3;
    int initial_backoff_ms = 200;
    std::string token_env = "GITHUB_TOKEN";
};

// Thin search-API client. Every response body is cached on disk verbatim,
// keyed by the query, so recorded fixtures replay offline and repeated runs
// do not consume rate limit.
class CatalogClient {
public:
    explicit CatalogClient(CatalogOptions options);

    // Number of repositories with `language` whose engagement (`stars` or
    // `forks`) lies in [lo, hi]. Throws RateLimitError after exhausting
    // retries on 403/429, ConfigError on 401, IoError on transport failure
    // or an offline cache miss, DataError on malformed responses.
    long long count_projects(const std::string& language, const std::string& engagement,
                             long long lo, long long hi);

    // P_i for each stratum index (range 10^i+1 .. 10^(i+1)).
    std::vector<StratumCount> fetch_stratum_counts(const std::string& language,
                                                   const std::string& engagement,
                                                   const std::vector<int>& stratum_indices);

    // The query string used for a count request (exposed for cache tooling).
    static std::string query_string(const std::string& language, const std::string& engagement,
                                    long long lo, long long hi);

private:
    std::string cache_path(const std::string& query) const;
    std::string fetch_body(const std::string& query);

    CatalogOptions options_;
};

// 10^i + 1 and 10^(i+1): the engagement bounds of stratum i.
long long stratum_lower_bound(int index);
long long stratum_upper_bound(int index);

}  // namespace cqmine
