#include "cqmine/sampler.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cqmine/errors.hpp"

namespace cqmine {

namespace {

long long pow10_ll(int exponent) {
    long long value = 1;
    for (int i = 0; i < exponent; ++i) value *= 10;
    return value;
}

}  // namespace

long long stratum_lower_bound(int index) { return pow10_ll(index) + 1; }

long long stratum_upper_bound(int index) { return pow10_ll(index + 1); }

std::vector<StratumPlan> plan_strata(const std::vector<StratumCount>& counts,
                                     long long n_target) {
    if (n_target <= 0) throw DataError("sample target must be positive");

    const size_t n = counts.size();
    // 2*T_i = P_i * (10^i + 10^(i+1)) keeps everything integral (the i=0
    // midpoint is half-integral), so shares are computed exactly.
    std::vector<__int128> twice_t(n);
    __int128 twice_total = 0;
    for (size_t s = 0; s < n; ++s) {
        if (counts[s].index < 0 || counts[s].index > 17) {
            throw DataError("stratum index out of range: " + std::to_string(counts[s].index));
        }
        if (counts[s].projects < 0) {
            throw DataError("negative project count in stratum " +
                            std::to_string(counts[s].index));
        }
        const __int128 decade_sum = static_cast<__int128>(pow10_ll(counts[s].index)) +
                                    static_cast<__int128>(pow10_ll(counts[s].index + 1));
        twice_t[s] = static_cast<__int128>(counts[s].projects) * decade_sum;
        twice_total += twice_t[s];
    }
    if (twice_total == 0) throw DataError("all strata are empty");

    // Raw share numerator/denominator: S*T_i = n_target * 2T_i / 2T_total.
    std::vector<long long> selected(n, 0);
    std::vector<__int128> remainder(n, 0);
    std::vector<int> rounded(n, 0);  // -1 rounded down, 0 exact, +1 rounded up
    long long total_selected = 0;
    for (size_t s = 0; s < n; ++s) {
        const __int128 numerator = static_cast<__int128>(n_target) * twice_t[s];
        __int128 quotient = numerator / twice_total;
        const __int128 r = numerator % twice_total;
        remainder[s] = r;
        if (2 * r > twice_total || (2 * r == twice_total && (quotient & 1) != 0)) {
            ++quotient;  // round half to even
            rounded[s] = +1;
        } else if (r > 0) {
            rounded[s] = -1;
        }
        selected[s] = static_cast<long long>(quotient);
        total_selected += selected[s];
    }

    long long diff = n_target - total_selected;
    if (diff != 0) {
        std::vector<size_t> order(n);
        for (size_t s = 0; s < n; ++s) order[s] = s;
        if (diff > 0) {
            // Bump rounded-down entries, largest remainder first, ties to the
            // lower stratum.
            std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
                return counts[a].index < counts[b].index;
            });
            for (size_t s : order) {
                if (diff == 0) break;
                if (rounded[s] == -1) {
                    ++selected[s];
                    --diff;
                }
            }
        } else {
            // Trim rounded-up entries, smallest remainder first, ties to the
            // higher stratum.
            std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                if (remainder[a] != remainder[b]) return remainder[a] < remainder[b];
                return counts[a].index > counts[b].index;
            });
            for (size_t s : order) {
                if (diff == 0) break;
                if (rounded[s] == +1 && selected[s] > 0) {
                    --selected[s];
                    ++diff;
                }
            }
        }
        // Rounding error per entry is < 1, so the eligible entries always
        // cover the deficit; this is a defensive fallback.
        for (size_t s : order) {
            if (diff == 0) break;
            if (diff > 0) {
                ++selected[s];
                --diff;
            } else if (selected[s] > 0) {
                --selected[s];
                ++diff;
            }
        }
        if (diff != 0) throw DataError("stratified apportionment failed to converge");
    }

    std::vector<StratumPlan> plan(n);
    for (size_t s = 0; s < n; ++s) {
        plan[s].index = counts[s].index;
        plan[s].projects = counts[s].projects;
        plan[s].total_engagements = static_cast<double>(twice_t[s]) / 2.0;
        plan[s].n_select = selected[s];
    }
    return plan;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

Verdict InclusionReport::overall() const {
    const Verdict all[] = {popularity, language, continuity};
    for (Verdict v : all) {
        if (v == Verdict::Fail) return Verdict::Fail;
    }
    for (Verdict v : all) {
        if (v == Verdict::Indeterminate) return Verdict::Indeterminate;
    }
    return Verdict::Pass;
}

InclusionReport check_inclusion(const RepoDescriptor& repo,
                                const std::string& required_language) {
    InclusionReport report;

    // Popularity: stars or forks strictly greater than 10. A missing field
    // can only widen the evidence, so "low" plus "unknown" is indeterminate.
    const bool stars_high = repo.stars && *repo.stars > 10;
    const bool forks_high = repo.forks && *repo.forks > 10;
    if (stars_high || forks_high) {
        report.popularity = Verdict::Pass;
    } else if (repo.stars && repo.forks) {
        report.popularity = Verdict::Fail;
        report.reasons.push_back("popularity: stars=" + std::to_string(*repo.stars) +
                                 " and forks=" + std::to_string(*repo.forks) +
                                 " are both <= 10");
    } else {
        report.popularity = Verdict::Indeterminate;
        report.reasons.push_back("popularity: stars/forks evidence incomplete");
    }

    if (!repo.language) {
        report.language = Verdict::Indeterminate;
        report.reasons.push_back("language: not recorded");
    } else {
        std::string have = *repo.language;
        std::string want = required_language;
        auto lower = [](std::string s) {
            std::transform(s.begin(), s.end(), s.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return s;
        };
        if (lower(have) == lower(want)) {
            report.language = Verdict::Pass;
        } else {
            report.language = Verdict::Fail;
            report.reasons.push_back("language: " + have + " != " + want);
        }
    }

    // Continuity: every one of the 20 most recent half-year intervals has a
    // commit. An empty interval among the evidence fails immediately; fewer
    // than 20 all-nonempty intervals is merely insufficient evidence.
    const size_t examined =
        std::min<size_t>(repo.half_year_commits.size(), kRequiredIntervals);
    bool gap = false;
    for (size_t i = 0; i < examined; ++i) {
        if (repo.half_year_commits[i] <= 0) {
            gap = true;
            report.continuity = Verdict::Fail;
            report.reasons.push_back("continuity: empty half-year interval at offset " +
                                     std::to_string(i));
            break;
        }
    }
    if (!gap) {
        if (examined >= static_cast<size_t>(kRequiredIntervals)) {
            report.continuity = Verdict::Pass;
        } else {
            report.continuity = Verdict::Indeterminate;
            report.reasons.push_back("continuity: only " + std::to_string(examined) + " of " +
                                     std::to_string(kRequiredIntervals) +
                                     " intervals in evidence");
        }
    }
    return report;
}

CatalogClient::CatalogClient(CatalogOptions options) : options_(std::move(options)) {}

std::string CatalogClient::query_string(const std::string& language,
                                        const std::string& engagement, long long lo,
                                        long long hi) {
    return "language:" + language + "+" + engagement + ":" + std::to_string(lo) + ".." +
           std::to_string(hi);
}

std::string CatalogClient::cache_path(const std::string& query) const {
    std::string key;
    key.reserve(query.size());
    for (char c : query) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
        key.push_back(keep ? c : '_');
    }
    return (std::filesystem::path(options_.cache_dir) / (key + ".json")).string();
}

std::string CatalogClient::fetch_body(const std::string& query) {
    std::string cached_path;
    if (!options_.cache_dir.empty()) {
        std::filesystem::create_directories(options_.cache_dir);
        cached_path = cache_path(query);
        std::ifstream cached(cached_path, std::ios::binary);
        if (cached) {
            std::ostringstream body;
            body << cached.rdbuf();
            return body.str();
        }
    }
    if (options_.offline) {
        throw IoError("offline mode and no cached response for query: " + query);
    }

    httplib::Client client(options_.base_url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);
    httplib::Headers headers = {{"Accept", "application/vnd.github+json"},
                                {"User-Agent", "cqmine/0.1"}};
    if (const char* token = std::getenv(options_.token_env.c_str());
        token != nullptr && token[0] != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    const std::string target = "/search/repositories?q=" + query + "&per_page=1";
    int backoff_ms = options_.initial_backoff_ms;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        httplib::Result response = client.Get(target, headers);
        if (!response) {
            if (attempt == options_.max_retries) {
                throw IoError("catalog request failed: " + httplib::to_string(response.error()) +
                              " (" + options_.base_url + target + ")");
            }
            continue;
        }
        if (response->status == 200) {
            if (!cached_path.empty()) {
                std::ofstream out(cached_path, std::ios::binary | std::ios::trunc);
                out << response->body;
                if (!out) throw IoError("cannot write cache file: " + cached_path);
            }
            return response->body;
        }
        if (response->status == 401) {
            throw ConfigError("catalog authentication rejected (HTTP 401); set $" +
                              options_.token_env);
        }
        if (response->status == 403 || response->status == 429) {
            continue;  // rate limited: back off and retry
        }
        throw IoError("catalog request returned HTTP " + std::to_string(response->status));
    }
    throw RateLimitError("catalog rate limit persisted after " +
                         std::to_string(options_.max_retries) + " retries for query: " + query);
}

long long CatalogClient::count_projects(const std::string& language,
                                        const std::string& engagement, long long lo,
                                        long long hi) {
    const std::string body = fetch_body(query_string(language, engagement, lo, hi));
    const nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("total_count") ||
        !parsed["total_count"].is_number()) {
        throw DataError("malformed catalog response (expected object with total_count)");
    }
    return parsed["total_count"].get<long long>();
}

std::vector<StratumCount> CatalogClient::fetch_stratum_counts(
    const std::string& language, const std::string& engagement,
    const std::vector<int>& stratum_indices) {
    std::vector<StratumCount> counts;
    counts.reserve(stratum_indices.size());
    for (int index : stratum_indices) {
        StratumCount count;
        count.index = index;
        count.projects = count_projects(language, engagement, stratum_lower_bound(index),
                                        stratum_upper_bound(index));
        counts.push_back(count);
    }
    return counts;
}

}  // namespace cqmine
