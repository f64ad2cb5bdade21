// Acceptance gate: one line per criterion, "PASS"/"FAIL" with measured
// values, exit status 1 when anything fails. Tolerances are pinned in each
// criterion so regressions surface as explicit numbers, not flaky drift.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cqmine/analysis.hpp"
#include "cqmine/cli.hpp"
#include "cqmine/metrics.hpp"
#include "cqmine/miner.hpp"
#include "cqmine/sampler.hpp"
#include "cqmine/stats.hpp"
#include "cqmine/style.hpp"
#include "cqmine/subprocess.hpp"

namespace fs = std::filesystem;
using namespace cqmine;
namespace stats = cqmine::stats;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() /
               ("cqmine_accept_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing file: " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    size_t begin = 0;
    for (;;) {
        const size_t pos = line.find(sep, begin);
        if (pos == std::string::npos) {
            out.push_back(line.substr(begin));
            return out;
        }
        out.push_back(line.substr(begin, pos - begin));
        begin = pos + 1;
    }
}

int count_lines(const std::string& text) {
    return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

// Deterministic normal deviates: hand-rolled Box-Muller over mt19937 so the
// synthetic corpora are identical on every platform.
struct GaussianSource {
    std::mt19937 rng;
    bool has_spare = false;
    double spare = 0.0;
    explicit GaussianSource(std::uint32_t seed) : rng(seed) {}
    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u1 = (static_cast<double>(rng()) + 1.0) / 4294967297.0;  // (0,1)
        const double u2 = static_cast<double>(rng()) / 4294967296.0;          // [0,1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare = radius * std::sin(angle);
        has_spare = true;
        return radius * std::cos(angle);
    }
};

// ---------------------------------------------------------------------------
// A1: the golden corpus reproduces the hand-counted oracle exactly.
// ---------------------------------------------------------------------------

std::string golden_path(const std::string& name) {
    return std::string(CQMINE_TEST_DATA_DIR) + "/golden/" + name;
}

// Oracle cells store derived ratios as "num/den"; evaluating the division in
// doubles reproduces the implementation arithmetic bit for bit.
double eval_rational(const std::string& text) {
    const size_t slash = text.find('/');
    if (slash == std::string::npos) throw std::runtime_error("bad oracle cell: " + text);
    return static_cast<double>(std::stoull(text.substr(0, slash))) /
           static_cast<double>(std::stoull(text.substr(slash + 1)));
}

bool a1_golden_corpus(std::string& detail) {
    const auto start = Clock::now();
    std::ifstream oracle(golden_path("expected.tsv"));
    if (!oracle) {
        detail = "expected.tsv missing";
        return false;
    }
    std::string line;
    std::getline(oracle, line);
    const auto header = split(line, '\t');
    int rows = 0;
    int mismatched_fields = 0;
    std::string first_mismatch;
    while (std::getline(oracle, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, '\t');
        if (cells.size() != 62) {
            detail = "oracle row with " + std::to_string(cells.size()) + " cells";
            return false;
        }
        const std::string& name = cells[0];
        const FileRecord record = analyze_source(read_file(golden_path(name)));
        const SourceMetrics& m = record.metrics;
        const std::uint64_t raw[12] = {m.n_statements,
                                       m.n_chars,
                                       m.n_comment_chars,
                                       m.n_comments,
                                       m.n_functions,
                                       m.n_lines,
                                       m.n_gotos,
                                       m.n_questionable_words,
                                       m.n_identifiers_unique,
                                       m.sum_unique_identifier_len,
                                       m.sum_nesting,
                                       m.n_nested_lines};
        const double derived[9] = {m.cd, m.cs, m.fs, m.gd, m.il, m.ll, m.qd, m.sn, m.si};
        auto flag = [&](const std::string& field) {
            ++mismatched_fields;
            if (first_mismatch.empty()) first_mismatch = name + ":" + field;
        };
        for (int i = 0; i < 12; ++i) {
            if (raw[i] != std::stoull(cells[i + 1])) flag(header[i + 1]);
        }
        for (int i = 0; i < 9; ++i) {
            if (derived[i] != eval_rational(cells[i + 13])) flag(header[i + 13]);
        }
        for (size_t r = 0; r < kStyleRuleCount; ++r) {
            const RuleCount& rc = record.style[static_cast<StyleRule>(r)];
            if (rc.a != std::stoull(cells[22 + 2 * r])) flag(header[22 + 2 * r]);
            if (rc.b != std::stoull(cells[23 + 2 * r])) flag(header[23 + 2 * r]);
        }
        ++rows;
    }
    const double elapsed = seconds_since(start);
    detail = std::to_string(rows) + " fixtures, " + std::to_string(mismatched_fields) +
             " field mismatches" +
             (first_mismatch.empty() ? "" : " (first: " + first_mismatch + ")") + ", " +
             fmt(elapsed) + "s (budget 1s)";
    return rows == 20 && mismatched_fields == 0 && elapsed < 1.0;
}

// ---------------------------------------------------------------------------
// A2: style inconsistency equals its definition on randomized sources and a
// consistently formatted file scores exactly zero.
// ---------------------------------------------------------------------------

std::string random_source(std::mt19937& rng) {
    const char* idents[] = {"alpha", "beta", "gamma", "delta", "count", "buffer"};
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> ident(0, 5);
    std::uniform_int_distribution<int> number(0, 99);
    std::uniform_int_distribution<int> shape(0, 4);
    std::uniform_int_distribution<int> n_lines(4, 24);

    auto join = [&](const std::vector<std::string>& tokens) {
        std::string line;
        for (size_t i = 0; i < tokens.size(); ++i) {
            if (i > 0 && coin(rng)) line += ' ';
            line += tokens[i];
        }
        if (coin(rng) == 0 && coin(rng) == 0) line += ' ';  // occasional trailing space
        return line + "\n";
    };

    std::string src;
    const int lines = n_lines(rng);
    for (int i = 0; i < lines; ++i) {
        const std::string a = idents[ident(rng)];
        const std::string b = idents[ident(rng)];
        const std::string n = std::to_string(number(rng));
        switch (shape(rng)) {
            case 0: src += join({"int", a, "=", n, "+", n, ";"}); break;
            case 1: src += join({"if", "(", a, "==", n, ")", "{", b, "=", a, "*", n, ";", "}"}); break;
            case 2: src += join({a, "[", n, "]", "=", b, ".", "field", ";"}); break;
            case 3: src += join({"while", "(", a, "<", n, ")", "{", a, "+=", n, ";", "}"}); break;
            case 4: src += join({"return", a, "->", "next", ";"}); break;
        }
    }
    return src;
}

bool a2_style_inconsistency(std::string& detail) {
    const auto start = Clock::now();
    std::mt19937 rng(20260814u);
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const FileRecord record = analyze_source(random_source(rng));
        std::uint64_t agree_min = 0;
        std::uint64_t total = 0;
        for (size_t r = 0; r < kStyleRuleCount; ++r) {
            const RuleCount& rc = record.style[static_cast<StyleRule>(r)];
            agree_min += std::min(rc.a, rc.b);
            total += rc.a + rc.b;
        }
        const double by_definition =
            total == 0 ? 0.0
                       : 100.0 * static_cast<double>(agree_min) / static_cast<double>(total);
        const double diff = std::fabs(record.metrics.si - by_definition);
        worst = std::max(worst, diff);
        if (diff > 1e-12 || record.metrics.si > 50.0) ++failures;
    }

    // One convention throughout -> zero inconsistency, exactly.
    const std::string uniform =
        "int alpha = 1 + 2;\n"
        "if (alpha == 3) {\n"
        "    alpha = alpha * 2;\n"
        "    buffer[0] = alpha;\n"
        "    item.field = buffer[0];\n"
        "}\n"
        "while (alpha < 10) {\n"
        "    alpha += 1;\n"
        "}\n"
        "return cursor->next;\n";
    const double uniform_si = analyze_source(uniform).metrics.si;
    const bool uniform_ok = uniform_si == 0.0;
    if (!uniform_ok) ++failures;

    detail = "1000 random files, max |si - definition| = " + fmt(worst, 15) +
             " (tol 1e-12), uniform file si = " + fmt(uniform_si, 6) + ", " +
             fmt(seconds_since(start)) + "s";
    return failures == 0;
}

// ---------------------------------------------------------------------------
// A3: statistics agree with independent numerical oracles.
// ---------------------------------------------------------------------------

double simpson_slice(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_slice(a, m, fa, flm, fm);
    const double right = simpson_slice(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// chi-squared CDF by integrating the density under x = u^2, which removes
// the k=1 singularity at the origin.
double chi2_cdf_reference(double x, double k) {
    if (x <= 0.0) return 0.0;
    auto integrand = [k](double u) {
        if (u <= 0.0) return 0.0;
        const double t = u * u;
        const double log_pdf = (0.5 * k - 1.0) * std::log(t) - 0.5 * t -
                               0.5 * k * std::log(2.0) - std::lgamma(0.5 * k);
        return std::exp(log_pdf) * 2.0 * u;
    };
    const double b = std::sqrt(x);
    const double fa = integrand(0.0);
    const double fb = integrand(b);
    const double fm = integrand(0.5 * b);
    const double whole = simpson_slice(0.0, b, fa, fm, fb);
    return adaptive_simpson(integrand, 0.0, b, fa, fm, fb, whole, 1e-12, 40);
}

bool a3_stats_oracles(std::string& detail) {
    const auto start = Clock::now();
    std::mt19937 rng(112233u);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_int_distribution<int> length(30, 120);
    std::uniform_real_distribution<double> chi_x(0.1, 30.0);
    std::uniform_int_distribution<int> chi_k(1, 15);

    double worst_acf = 0.0, worst_chi = 0.0, worst_ks = 0.0;
    int failures = 0;

    for (int trial = 0; trial < 1000; ++trial) {
        // acf against a direct double loop
        const int n = length(rng);
        std::vector<double> series(n);
        double state = 0.0;
        for (double& v : series) {
            state = 0.5 * state + noise(rng);
            v = state;
        }
        const size_t max_lag = static_cast<size_t>(n / 3);
        const auto mine = stats::acf(series, max_lag);
        double mean = 0.0;
        for (double v : series) mean += v;
        mean /= n;
        double denom = 0.0;
        for (double v : series) denom += (v - mean) * (v - mean);
        for (size_t k = 1; k <= max_lag; ++k) {
            double num = 0.0;
            for (size_t t = 0; t + k < series.size(); ++t) {
                num += (series[t] - mean) * (series[t + k] - mean);
            }
            const double diff = std::fabs(mine[k - 1] - num / denom);
            worst_acf = std::max(worst_acf, diff);
            if (diff > 1e-12) ++failures;
        }

        // Ljung-Box statistic against an independent accumulation
        const size_t h = std::max<size_t>(1, max_lag / 2);
        const auto lb = stats::ljung_box(mine, static_cast<size_t>(n), h);
        double q = 0.0;
        for (size_t k = 1; k <= h; ++k) {
            q += mine[k - 1] * mine[k - 1] / static_cast<double>(n - k);
        }
        q *= static_cast<double>(n) * (n + 2.0);
        if (std::fabs(lb.q - q) > 1e-12 * std::max(1.0, std::fabs(q))) ++failures;

        // chi-squared tail against adaptive Simpson
        const double x = chi_x(rng);
        const double k = chi_k(rng);
        const double chi_diff =
            std::fabs(stats::chi_squared_sf(x, k) - (1.0 - chi2_cdf_reference(x, k)));
        worst_chi = std::max(worst_chi, chi_diff);
        if (chi_diff > 1e-8) ++failures;

        // KS statistic against full ECDF enumeration
        std::vector<double> xs(10 + trial % 40), ys(10 + (trial * 7) % 40);
        for (double& v : xs) v = noise(rng);
        for (double& v : ys) v = 0.3 + noise(rng);
        if (trial % 4 == 0) ys[0] = xs[0];  // exercise cross-sample ties
        const auto ks = stats::ks_two_sample(xs, ys);
        double d_ref = 0.0;
        auto ecdf = [](const std::vector<double>& v, double t) {
            return static_cast<double>(std::count_if(v.begin(), v.end(),
                                                     [t](double u) { return u <= t; })) /
                   static_cast<double>(v.size());
        };
        for (double t : xs) d_ref = std::max(d_ref, std::fabs(ecdf(xs, t) - ecdf(ys, t)));
        for (double t : ys) d_ref = std::max(d_ref, std::fabs(ecdf(xs, t) - ecdf(ys, t)));
        const double ks_diff = std::fabs(ks.d - d_ref);
        worst_ks = std::max(worst_ks, ks_diff);
        if (ks_diff > 1e-12) ++failures;
    }

    // Benjamini-Hochberg: frozen hand vector, exactly.
    const auto adjusted = stats::bh_adjust(std::vector<double>{0.01, 0.04, 0.03});
    if (!(adjusted[0] == 0.03 && adjusted[1] == 0.04 && adjusted[2] == 0.04)) ++failures;

    const double elapsed = seconds_since(start);
    detail = "1000 trials: max acf err " + fmt(worst_acf, 15) + ", max chi2 err " +
             fmt(worst_chi, 12) + " (tol 1e-8), max ks err " + fmt(worst_ks, 15) + ", " +
             fmt(elapsed) + "s (budget 30s)";
    return failures == 0 && elapsed < 30.0;
}

// ---------------------------------------------------------------------------
// A4: sampling plans are integer-exact.
// ---------------------------------------------------------------------------

bool a4_sampling_plan(std::string& detail) {
    int failures = 0;

    const auto single = plan_strata({{4, 51}}, 10);
    if (single.size() != 1 || single[0].total_engagements != 2805000.0 ||
        single[0].n_select != 10) {
        ++failures;
    }

    const auto tie = plan_strata({{1, 10}, {2, 1}}, 5);
    if (tie.size() != 2 || tie[0].n_select != 3 || tie[1].n_select != 2) ++failures;

    std::mt19937 rng(555u);
    std::uniform_int_distribution<int> n_strata(1, 10);
    std::uniform_int_distribution<long long> projects(0, 100000);
    std::uniform_int_distribution<long long> target(1, 1000);
    int exact = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<StratumCount> counts;
        long long total_projects = 0;
        const int n = n_strata(rng);
        for (int i = 0; i < n; ++i) {
            counts.push_back({i, projects(rng)});
            total_projects += counts.back().projects;
        }
        if (total_projects == 0) counts[0].projects = 1;
        const long long n_target = target(rng);
        const auto plan = plan_strata(counts, n_target);
        long long total = 0;
        bool sane = true;
        for (const auto& stratum : plan) {
            total += stratum.n_select;
            if (stratum.n_select < 0 || (stratum.projects == 0 && stratum.n_select != 0)) {
                sane = false;
            }
        }
        if (total == n_target && sane) ++exact;
    }
    if (exact != 100) ++failures;

    detail = "worked example T=2805000, tie-break [3,2], " + std::to_string(exact) +
             "/100 random plans sum exactly to target";
    return failures == 0;
}

// ---------------------------------------------------------------------------
// A5: RQ1 recovers a planted autocorrelated subpopulation.
// ---------------------------------------------------------------------------

FileSeries synthetic_series(const std::string& repo, const std::string& path,
                            const std::vector<double>& values) {
    FileSeries series;
    series.repo = repo;
    series.path = path;
    series.committers.assign(values.size(), "dev@synthetic");
    for (int m = 0; m < kAnalysisMetricCount; ++m) series.values[m] = values;
    return series;
}

bool a5_rq1_planted(std::string& detail) {
    const auto start = Clock::now();
    GaussianSource gauss(424242u);
    std::vector<FileSeries> corpus;
    const int n_points = 200;
    for (int f = 0; f < 100; ++f) {
        std::vector<double> values(n_points);
        if (f < 40) {  // AR(1), coefficient 0.9
            double state = 0.0;
            for (double& v : values) {
                state = 0.9 * state + gauss.next();
                v = state;
            }
        } else {  // white noise
            for (double& v : values) v = gauss.next();
        }
        corpus.push_back(
            synthetic_series("synthetic", "f" + std::to_string(f) + ".c", values));
    }

    const Rq1Options options;  // min_commits 50, max_lag 50, threshold 0.5, alpha 0.05
    const auto result = rq1(corpus, options);

    bool ok = true;
    std::string why;
    if (result.eligible[0] != 100) {
        ok = false;
        why = "eligible=" + std::to_string(result.eligible[0]);
    }
    std::vector<double> pct(50);
    for (int k = 0; k < 50; ++k) {
        pct[k] = 100.0 * static_cast<double>(result.hits[0][k]) /
                 static_cast<double>(result.eligible[0]);
    }
    if (pct[0] < 35.0 || pct[0] > 45.0) {
        ok = false;
        why += " lag-1 pct out of window";
    }
    double max_rise = 0.0;
    for (int k = 1; k < 50; ++k) max_rise = std::max(max_rise, pct[k] - pct[k - 1]);
    if (max_rise > 5.0) {
        ok = false;
        why += " non-monotone decay";
    }

    const double elapsed = seconds_since(start);
    detail = "planted 40/100 AR(1) files: lag-1 " + fmt(pct[0], 1) +
             "% (window [35,45]), max lag-to-lag rise " + fmt(max_rise, 1) + "pp (tol 5), " +
             fmt(elapsed) + "s (budget 60s)" + why;
    return ok && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// A6: RQ2 recovers planted developer-level differences.
// ---------------------------------------------------------------------------

bool a6_rq2_planted(std::string& detail) {
    const auto start = Clock::now();
    GaussianSource gauss(777777u);

    auto walk = [&](double first, double drift, int steps) {
        std::vector<double> values(steps + 1);
        values[0] = first;
        for (int i = 1; i <= steps; ++i) values[i] = values[i - 1] + drift + gauss.next();
        return values;
    };

    auto file_for = [&](const std::string& path, const std::string& dev,
                        const std::vector<double>& values) {
        FileSeries series = synthetic_series("synthetic", path, values);
        series.committers.assign(values.size(), dev);
        return series;
    };

    std::vector<FileSeries> corpus;        // 10 signal + 10 null developers
    std::vector<FileSeries> null_corpus;   // the 10 null developers alone
    for (int d = 0; d < 10; ++d) {
        const std::string sig = "sig" + std::to_string(d) + "@x";
        corpus.push_back(file_for("top_s" + std::to_string(d) + ".c", sig,
                                  walk(100.0, 5.0, 30)));
        corpus.push_back(file_for("bot_s" + std::to_string(d) + ".c", sig,
                                  walk(0.0, 0.0, 30)));
        const std::string nul = "null" + std::to_string(d) + "@x";
        const FileSeries top_null =
            file_for("top_n" + std::to_string(d) + ".c", nul, walk(100.0, 0.0, 30));
        const FileSeries bot_null =
            file_for("bot_n" + std::to_string(d) + ".c", nul, walk(0.0, 0.0, 30));
        corpus.push_back(top_null);
        corpus.push_back(bot_null);
        null_corpus.push_back(top_null);
        null_corpus.push_back(bot_null);
    }

    const Rq2Options options;  // quantiles .25/.75, min 10 commits, alpha .05, BH per cell
    const auto mixed = rq2(corpus, options);
    const auto nulls = rq2(null_corpus, options);

    bool ok = true;
    double mixed_min = 100.0, mixed_max = 0.0, null_max = 0.0;
    for (int g = 0; g < kAnalysisMetricCount; ++g) {
        for (int t = 0; t < kAnalysisMetricCount; ++t) {
            const auto& cell = mixed.cells[g][t];
            if (cell.n_developers != 20) ok = false;
            const double pct =
                100.0 * static_cast<double>(cell.n_significant) / cell.n_developers;
            mixed_min = std::min(mixed_min, pct);
            mixed_max = std::max(mixed_max, pct);
            const auto& null_cell = nulls.cells[g][t];
            if (null_cell.n_developers != 10) ok = false;
            null_max = std::max(null_max, 100.0 * static_cast<double>(
                                              null_cell.n_significant) /
                                              null_cell.n_developers);
        }
    }
    if (mixed_min < 40.0 || mixed_max > 60.0) ok = false;
    if (null_max >= 10.0) ok = false;

    const double elapsed = seconds_since(start);
    detail = "planted cells " + fmt(mixed_min, 1) + "-" + fmt(mixed_max, 1) +
             "% significant (window [40,60]), null-only max " + fmt(null_max, 1) +
             "% (< 10), " + fmt(elapsed) + "s (budget 60s)";
    return ok && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// A7: mining is parallel-deterministic, cache-correct, and fast enough.
// ---------------------------------------------------------------------------

std::string synthetic_c_source(int file_idx, int rev, int lines) {
    std::string out = "/* synthetic " + std::to_string(file_idx) + " rev " +
                      std::to_string(rev) + " */\n";
    out += "int work_" + std::to_string(file_idx) + "(int x) {\n";
    for (int i = 0; i < lines - 4; ++i) {
        out += "    x += " + std::to_string((i * 7 + rev * 13 + file_idx) % 97) + ";\n";
    }
    out += "    return x;\n}\n";
    return out;
}

// Builds a repository with `files` x `revisions` blobs via git fast-import.
void build_history_repo(const fs::path& repo, int files, int revisions, int lines) {
    if (!run_command("git init -q -b master " + shell_quote(repo.string())).ok()) {
        throw std::runtime_error("git init failed");
    }
    const fs::path stream_path = repo / "fastimport.stream";
    {
        std::ofstream stream(stream_path, std::ios::binary);
        for (int rev = 0; rev < revisions; ++rev) {
            const std::string msg = "rev " + std::to_string(rev);
            stream << "commit refs/heads/master\n";
            stream << "committer Dev" << rev % 5 << " <dev" << rev % 5
                   << "@example.com> " << 1500000000 + rev * 86400 << " +0000\n";
            stream << "data " << msg.size() << "\n" << msg << "\n";
            for (int f = 0; f < files; ++f) {
                const std::string body = synthetic_c_source(f, rev, lines);
                stream << "M 100644 inline src/f" << f << ".c\n";
                stream << "data " << body.size() << "\n" << body << "\n";
            }
        }
        if (!stream) throw std::runtime_error("cannot write fast-import stream");
    }
    if (!run_command("git -C " + shell_quote(repo.string()) + " fast-import --quiet < " +
                     shell_quote(stream_path.string()))
             .ok()) {
        throw std::runtime_error("git fast-import failed");
    }
    fs::remove(stream_path);
}

bool a7_mining(std::string& detail) {
    TempDir dir;
    const fs::path repo = dir.path / "bigrepo";
    const int files = 25, revisions = 40, lines = 1000;
    build_history_repo(repo, files, revisions, lines);

    std::ostringstream log;
    MineOptions cold;
    cold.jobs = 1;
    cold.output_dir = (dir.path / "run1").string();
    const MineStats serial = mine_repository(repo.string(), cold, log);

    MineOptions parallel = cold;
    parallel.jobs = 8;
    parallel.output_dir = (dir.path / "run8").string();
    const MineStats threaded = mine_repository(repo.string(), parallel, log);

    const std::string timeline1 = read_file(serial.timeline_path);
    const std::string timeline8 = read_file(threaded.timeline_path);
    const bool identical = timeline1 == timeline8;
    const bool complete =
        serial.records == static_cast<std::uint64_t>(files) * revisions &&
        count_lines(timeline1) == files * revisions + 1;

    MineOptions cached = parallel;
    cached.cache_dir = (dir.path / "cache").string();
    cached.output_dir = (dir.path / "run_cached").string();
    const MineStats warm_fill = mine_repository(repo.string(), cached, log);
    cached.output_dir = (dir.path / "run_warm").string();
    const MineStats warm = mine_repository(repo.string(), cached, log);
    const bool cache_ok = warm.computed == 0 && warm.cache_hits == warm.records &&
                          read_file(warm.timeline_path) == timeline8 &&
                          warm_fill.cache_hits == 0;

    const double rate = threaded.lines_per_second;
    const bool meets_target = rate >= 25000.0;
    const bool meets_waiver = rate >= 10000.0;
    std::string verdict;
    if (meets_target) {
        verdict = "meets 25k lines/s target";
    } else if (meets_waiver) {
        verdict = "below 25k target but within the documented 10k lines/s waiver";
    } else {
        verdict = "below the 10k lines/s waiver floor";
    }

    detail = std::to_string(serial.records) + " records over " +
             std::to_string(serial.lines_processed) + " lines; 1-vs-8 workers " +
             (identical ? "byte-identical" : "DIFFER") + "; warm cache recomputed " +
             std::to_string(warm.computed) + " blobs; " + fmt(rate / 1000.0, 1) +
             "k lines/s (" + verdict + ")";
    return identical && complete && cache_ok && meets_waiver;
}

// ---------------------------------------------------------------------------
// A8: the replication pipeline runs end to end, deterministically.
// ---------------------------------------------------------------------------

bool a8_replicate(std::string& detail) {
    const auto start = Clock::now();
    TempDir dir;
    build_history_repo(dir.path / "rep_a", 3, 60, 30);
    build_history_repo(dir.path / "rep_b", 3, 60, 30);
    const fs::path list = dir.path / "repos.txt";
    {
        std::ofstream out(list);
        out << (dir.path / "rep_a").string() << "\n"
            << (dir.path / "rep_b").string() << "\n";
    }

    auto replicate_into = [&](const fs::path& out_dir) {
        const std::string out_str = out_dir.string();
        const std::string list_str = list.string();
        const char* argv[] = {"cqmine", "replicate",      "--repos", list_str.c_str(),
                              "--out",  out_str.c_str(),  "--jobs",  "2",
                              "--svg"};
        return run_cli(static_cast<int>(std::size(argv)), argv);
    };

    const int code1 = replicate_into(dir.path / "out1");
    const int code2 = replicate_into(dir.path / "out2");

    bool ok = code1 == 0 && code2 == 0;
    std::string why = ok ? "" : " exit codes " + std::to_string(code1) + "/" +
                                    std::to_string(code2);

    const char* artifacts[] = {"rep_a.timeline.tsv", "rep_b.timeline.tsv", "rq1_acf.csv",
                               "rq2_heatmap.csv",    "rq1_acf.svg",        "rq2_heatmap.svg"};
    bool deterministic = true;
    for (const char* name : artifacts) {
        const fs::path p1 = dir.path / "out1" / name;
        const fs::path p2 = dir.path / "out2" / name;
        if (!fs::exists(p1) || !fs::exists(p2)) {
            ok = false;
            why += std::string(" missing ") + name;
            continue;
        }
        if (read_file(p1.string()) != read_file(p2.string())) {
            deterministic = false;
            why += std::string(" nondeterministic ") + name;
        }
    }
    ok = ok && deterministic;

    int rq1_rows = 0, rq2_rows = 0;
    if (fs::exists(dir.path / "out1" / "rq1_acf.csv")) {
        rq1_rows = count_lines(read_file((dir.path / "out1" / "rq1_acf.csv").string()));
        rq2_rows = count_lines(read_file((dir.path / "out1" / "rq2_heatmap.csv").string()));
        if (rq1_rows != 1 + 11 * 50 || rq2_rows != 1 + 121) {
            ok = false;
            why += " bad csv shape";
        }
    }

    // The timelines must parse back through the analysis loader (schema check).
    try {
        const auto series = load_timelines(
            resolve_timeline_inputs({(dir.path / "out1").string()}));
        if (series.size() != 6) {  // 2 repos x 3 files
            ok = false;
            why += " parsed " + std::to_string(series.size()) + " series";
        }
    } catch (const std::exception& e) {
        ok = false;
        why += std::string(" reload failed: ") + e.what();
    }

    detail = "2 repos replicated twice: rq1 csv " + std::to_string(rq1_rows) +
             " rows, rq2 csv " + std::to_string(rq2_rows) + " rows, outputs " +
             (deterministic ? "byte-identical" : "DIFFER") + ", " +
             fmt(seconds_since(start)) + "s" + why;
    return ok;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* title;
        bool (*run)(std::string&);
    };
    const Criterion criteria[] = {
        {"A1", "golden corpus exact", a1_golden_corpus},
        {"A2", "style inconsistency matches definition", a2_style_inconsistency},
        {"A3", "statistics match numerical oracles", a3_stats_oracles},
        {"A4", "sampling plans integer-exact", a4_sampling_plan},
        {"A5", "RQ1 recovers planted autocorrelation", a5_rq1_planted},
        {"A6", "RQ2 recovers planted developer effect", a6_rq2_planted},
        {"A7", "mining deterministic, cached, fast", a7_mining},
        {"A8", "replication pipeline deterministic", a8_replicate},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        std::string detail;
        bool pass = false;
        try {
            pass = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!pass) ++failed;
        std::printf("%s %s (%s): %s\n", pass ? "PASS" : "FAIL", criterion.id,
                    criterion.title, detail.c_str());
        std::fflush(stdout);
    }
    if (failed > 0) {
        std::printf("%d of 8 acceptance criteria failed\n", failed);
        return 1;
    }
    std::printf("all 8 acceptance criteria passed\n");
    return 0;
}
