#include "cqmine/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqmine/analysis.hpp"
#include "cqmine/errors.hpp"
#include "cqmine/metrics.hpp"
#include "cqmine/miner.hpp"
#include "cqmine/sampler.hpp"
#include "cqmine/version.hpp"

namespace cqmine {

namespace {

struct MeasureArgs {
    bool header = false;
};

struct MineArgs {
    std::string repo;
    std::vector<std::string> extensions;
    int jobs = 1;
    std::string cache_dir;
    std::string output_dir = ".";
};

struct Rq1Args {
    std::vector<std::string> timelines;
    std::string output_dir;
    Rq1Options options;
    bool svg = false;
};

struct Rq2Args {
    std::vector<std::string> timelines;
    std::string output_dir;
    std::string quantiles = "0.25,0.75";
    std::string bh_scope = "cell";
    Rq2Options options;
    bool svg = false;
};

struct PlanArgs {
    std::string language = "c";
    std::string engagement = "stars";
    long long n_target = 0;
    std::vector<int> strata;
    std::vector<long long> counts;
    std::string cache_dir;
    std::string base_url = "https://api.github.com";
    bool offline = false;
};

struct ReplicateArgs {
    std::string repo_list;
    std::string output_dir;
    std::vector<std::string> extensions;
    int jobs = 1;
    std::string cache_dir;
    Rq1Options rq1_options;
    Rq2Options rq2_options;
    std::string quantiles = "0.25,0.75";
    std::string bh_scope = "cell";
    bool svg = false;
};

void parse_quantiles(const std::string& text, Rq2Options& options) {
    const size_t comma = text.find(',');
    auto parse_one = [&](const std::string& piece) {
        double value = 0.0;
        const char* begin = piece.data();
        const char* end = begin + piece.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end) {
            throw UsageError("--quantiles expects two comma-separated numbers, got '" + text +
                             "'");
        }
        return value;
    };
    if (comma == std::string::npos) {
        throw UsageError("--quantiles expects two comma-separated numbers, got '" + text + "'");
    }
    options.q_low = parse_one(text.substr(0, comma));
    options.q_high = parse_one(text.substr(comma + 1));
    if (!(0.0 < options.q_low && options.q_low < options.q_high && options.q_high < 1.0)) {
        throw UsageError("--quantiles must satisfy 0 < low < high < 1");
    }
}

void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
}

std::string read_all_stdin() {
    std::ios_base::sync_with_stdio(false);
    std::string content((std::istreambuf_iterator<char>(std::cin)),
                        std::istreambuf_iterator<char>());
    return content;
}

void run_measure(const MeasureArgs& args) {
    const std::string source = read_all_stdin();
    const FileRecord record = analyze_source(source);
    if (args.header) {
        const std::vector<std::string> names = record_field_names();
        for (size_t i = 0; i < names.size(); ++i) {
            if (i > 0) std::cout << '\t';
            std::cout << names[i];
        }
        std::cout << '\n';
    }
    std::cout << format_record(record) << '\n';
}

void run_mine(const MineArgs& args) {
    MineOptions options;
    if (!args.extensions.empty()) options.extensions = args.extensions;
    options.jobs = args.jobs;
    options.cache_dir = args.cache_dir;
    options.output_dir = args.output_dir;
    const MineStats stats = mine_repository(args.repo, options, std::cerr);
    std::cerr << "mined " << stats.files << " files, " << stats.records << " records ("
              << stats.cache_hits << " cache hits, " << stats.skipped << " skipped) in "
              << format_double(stats.elapsed_seconds) << "s";
    if (stats.lines_processed > 0) {
        std::cerr << ", " << stats.lines_processed << " lines at "
                  << static_cast<long long>(stats.lines_per_second) << " lines/s";
    }
    std::cerr << "\nwrote " << stats.timeline_path << "\nwrote " << stats.manifest_path << "\n";
}

void run_rq1(const Rq1Args& args) {
    const std::vector<std::string> inputs = resolve_timeline_inputs(args.timelines);
    const std::vector<FileSeries> series = load_timelines(inputs);
    const Rq1Result result = rq1(series, args.options);

    std::filesystem::create_directories(args.output_dir);
    const std::filesystem::path out_dir(args.output_dir);
    const std::string csv_path = (out_dir / "rq1_acf.csv").string();
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot write " + csv_path);
    write_rq1_csv(result, csv);
    csv.close();
    if (!csv) throw IoError("failed writing " + csv_path);
    std::cerr << "wrote " << csv_path << "\n";

    if (args.svg) {
        const std::string svg_path = (out_dir / "rq1_acf.svg").string();
        std::ofstream svg(svg_path, std::ios::binary | std::ios::trunc);
        if (!svg) throw IoError("cannot write " + svg_path);
        write_rq1_svg(result, svg);
        svg.close();
        if (!svg) throw IoError("failed writing " + svg_path);
        std::cerr << "wrote " << svg_path << "\n";
    }
}

void run_rq2(const Rq2Args& args) {
    Rq2Options options = args.options;
    parse_quantiles(args.quantiles, options);
    options.bh_global = args.bh_scope == "global";
    validate_alpha(options.alpha);

    const std::vector<std::string> inputs = resolve_timeline_inputs(args.timelines);
    const std::vector<FileSeries> series = load_timelines(inputs);
    const Rq2Result result = rq2(series, options);

    std::filesystem::create_directories(args.output_dir);
    const std::filesystem::path out_dir(args.output_dir);
    const std::string csv_path = (out_dir / "rq2_heatmap.csv").string();
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot write " + csv_path);
    write_rq2_csv(result, csv);
    csv.close();
    if (!csv) throw IoError("failed writing " + csv_path);
    std::cerr << "wrote " << csv_path << "\n";

    if (args.svg) {
        const std::string svg_path = (out_dir / "rq2_heatmap.svg").string();
        std::ofstream svg(svg_path, std::ios::binary | std::ios::trunc);
        if (!svg) throw IoError("cannot write " + svg_path);
        write_rq2_svg(result, svg);
        svg.close();
        if (!svg) throw IoError("failed writing " + svg_path);
        std::cerr << "wrote " << svg_path << "\n";
    }
}

void run_plan(const PlanArgs& args) {
    if (args.n_target <= 0) throw UsageError("--n must be positive");
    if (args.engagement != "stars" && args.engagement != "forks") {
        throw UsageError("--engagement must be 'stars' or 'forks'");
    }

    std::vector<StratumCount> counts;
    if (!args.counts.empty()) {
        if (args.counts.size() != args.strata.size()) {
            throw UsageError("--counts must list one value per stratum (" +
                             std::to_string(args.strata.size()) + " expected)");
        }
        for (size_t i = 0; i < args.strata.size(); ++i) {
            counts.push_back({args.strata[i], args.counts[i]});
        }
    } else {
        CatalogOptions catalog;
        catalog.base_url = args.base_url;
        catalog.cache_dir = args.cache_dir;
        catalog.offline = args.offline;
        CatalogClient client(catalog);
        counts = client.fetch_stratum_counts(args.language, args.engagement, args.strata);
    }

    const std::vector<StratumPlan> plan = plan_strata(counts, args.n_target);
    std::cout << "stratum\trange_low\trange_high\tprojects\ttotal_engagements\tn_select\n";
    for (const StratumPlan& stratum : plan) {
        std::cout << stratum.index << '\t' << stratum_lower_bound(stratum.index) << '\t'
                  << stratum_upper_bound(stratum.index) << '\t' << stratum.projects << '\t'
                  << format_double(stratum.total_engagements) << '\t' << stratum.n_select
                  << '\n';
    }
}

void run_replicate(const ReplicateArgs& args) {
    Rq2Options rq2_options = args.rq2_options;
    parse_quantiles(args.quantiles, rq2_options);
    rq2_options.bh_global = args.bh_scope == "global";
    validate_alpha(args.rq1_options.alpha);
    validate_alpha(rq2_options.alpha);

    std::ifstream list(args.repo_list);
    if (!list) throw IoError("cannot open repository list: " + args.repo_list);
    std::vector<std::string> repos;
    std::string line;
    while (std::getline(list, line)) {
        const size_t begin = line.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) continue;
        const size_t end = line.find_last_not_of(" \t\r\n");
        std::string repo = line.substr(begin, end - begin + 1);
        if (repo.empty() || repo[0] == '#') continue;
        repos.push_back(std::move(repo));
    }
    if (repos.empty()) throw DataError("repository list is empty: " + args.repo_list);

    std::filesystem::create_directories(args.output_dir);
    std::vector<std::string> timelines;
    for (const std::string& repo : repos) {
        std::cerr << "mining " << repo << "\n";
        MineOptions options;
        if (!args.extensions.empty()) options.extensions = args.extensions;
        options.jobs = args.jobs;
        options.cache_dir = args.cache_dir;
        options.output_dir = args.output_dir;
        const MineStats stats = mine_repository(repo, options, std::cerr);
        timelines.push_back(stats.timeline_path);
    }

    Rq1Args rq1_args;
    rq1_args.timelines = timelines;
    rq1_args.output_dir = args.output_dir;
    rq1_args.options = args.rq1_options;
    rq1_args.svg = args.svg;
    run_rq1(rq1_args);

    Rq2Args rq2_args;
    rq2_args.timelines = timelines;
    rq2_args.output_dir = args.output_dir;
    rq2_args.quantiles = args.quantiles;
    rq2_args.bh_scope = args.bh_scope;
    rq2_args.options = rq2_options;
    rq2_args.svg = args.svg;
    run_rq2(rq2_args);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"cqmine: lexical C code-quality measurement and history analysis"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "key=value configuration file (flags override)");
    app.require_subcommand(1);

    MeasureArgs measure_args;
    CLI::App* measure = app.add_subcommand(
        "measure", "Measure one C source file from standard input (TSV record on stdout)");
    measure->add_flag("--header", measure_args.header, "Emit the column-name header line");

    MineArgs mine_args;
    CLI::App* mine =
        app.add_subcommand("mine", "Mine per-file metric timelines from a git repository");
    mine->add_option("--repo", mine_args.repo, "Path to the git repository")->required();
    mine->add_option("--ext", mine_args.extensions,
                     "File extensions to mine (default: .c; repeatable)");
    mine->add_option("--jobs", mine_args.jobs, "Worker threads (default: 1)")
        ->check(CLI::PositiveNumber);
    mine->add_option("--cache-dir", mine_args.cache_dir,
                     "Metrics cache directory (enables warm reruns and resuming)");
    mine->add_option("--out", mine_args.output_dir, "Output directory (default: .)");

    Rq1Args rq1_args;
    CLI::App* rq1_cmd = app.add_subcommand(
        "rq1", "Autocorrelation analysis: share of files with persistent quality");
    rq1_cmd->add_option("--timelines", rq1_args.timelines,
                        "Timeline TSVs (globs, files, or directories)")
        ->required();
    rq1_cmd->add_option("--out", rq1_args.output_dir, "Output directory")->required();
    rq1_cmd->add_option("--max-lag", rq1_args.options.max_lag, "Maximum lag (default: 50)")
        ->check(CLI::PositiveNumber);
    rq1_cmd->add_option("--threshold", rq1_args.options.threshold,
                        "Autocorrelation threshold (default: 0.5)");
    rq1_cmd->add_option("--alpha", rq1_args.options.alpha,
                        "Significance level (default: 0.05)");
    rq1_cmd->add_option("--min-commits", rq1_args.options.min_commits,
                        "Eligibility: more commits than this (default: 50)")
        ->check(CLI::NonNegativeNumber);
    rq1_cmd->add_flag("--svg", rq1_args.svg, "Also write rq1_acf.svg");

    Rq2Args rq2_args;
    CLI::App* rq2_cmd = app.add_subcommand(
        "rq2", "Quantile-group analysis: developer deltas in top vs bottom files");
    rq2_cmd->add_option("--timelines", rq2_args.timelines,
                        "Timeline TSVs (globs, files, or directories)")
        ->required();
    rq2_cmd->add_option("--out", rq2_args.output_dir, "Output directory")->required();
    rq2_cmd->add_option("--quantiles", rq2_args.quantiles,
                        "Low,high grouping quantiles (default: 0.25,0.75)");
    rq2_cmd->add_option("--min-dev-commits", rq2_args.options.min_dev_commits,
                        "Minimum commits per developer per group (default: 10)")
        ->check(CLI::PositiveNumber);
    rq2_cmd->add_option("--alpha", rq2_args.options.alpha,
                        "Significance level (default: 0.05)");
    rq2_cmd->add_option("--bh-scope", rq2_args.bh_scope,
                        "Benjamini-Hochberg scope (default: cell)")
        ->check(CLI::IsMember({"cell", "global"}));
    rq2_cmd->add_flag("--svg", rq2_args.svg, "Also write rq2_heatmap.svg");

    PlanArgs plan_args;
    CLI::App* plan_cmd =
        app.add_subcommand("plan", "Compute the stratified repository sampling plan");
    plan_cmd->add_option("--language", plan_args.language, "Target language (default: c)");
    plan_cmd->add_option("--engagement", plan_args.engagement,
                         "Engagement kind: stars or forks (default: stars)");
    plan_cmd->add_option("--n", plan_args.n_target, "Total repositories to sample")
        ->required()
        ->check(CLI::PositiveNumber);
    plan_cmd
        ->add_option("--strata", plan_args.strata,
                     "Stratum indices; stratum i spans 10^i+1..10^(i+1) (default: 1 2 3 4 5)")
        ->expected(-1);
    plan_cmd->add_option("--counts", plan_args.counts,
                         "Per-stratum project counts, bypassing the catalog")
        ->expected(-1);
    plan_cmd->add_option("--cache-dir", plan_args.cache_dir,
                         "Catalog response cache directory");
    plan_cmd->add_option("--base-url", plan_args.base_url,
                         "Catalog base URL (default: https://api.github.com)");
    plan_cmd->add_flag("--offline", plan_args.offline,
                       "Serve catalog queries exclusively from the cache");

    ReplicateArgs replicate_args;
    CLI::App* replicate_cmd = app.add_subcommand(
        "replicate", "Chain mine, rq1 and rq2 over a repository list file");
    replicate_cmd
        ->add_option("--repos", replicate_args.repo_list,
                     "Text file listing repository paths, one per line")
        ->required();
    replicate_cmd->add_option("--out", replicate_args.output_dir, "Output directory")
        ->required();
    replicate_cmd->add_option("--ext", replicate_args.extensions,
                              "File extensions to mine (default: .c; repeatable)");
    replicate_cmd->add_option("--jobs", replicate_args.jobs, "Worker threads (default: 1)")
        ->check(CLI::PositiveNumber);
    replicate_cmd->add_option("--cache-dir", replicate_args.cache_dir,
                              "Metrics cache directory");
    replicate_cmd->add_option("--max-lag", replicate_args.rq1_options.max_lag,
                              "RQ1 maximum lag (default: 50)")
        ->check(CLI::PositiveNumber);
    replicate_cmd->add_option("--threshold", replicate_args.rq1_options.threshold,
                              "RQ1 autocorrelation threshold (default: 0.5)");
    replicate_cmd->add_option("--alpha", replicate_args.rq1_options.alpha,
                              "Significance level for both analyses (default: 0.05)");
    replicate_cmd->add_option("--min-commits", replicate_args.rq1_options.min_commits,
                              "RQ1 eligibility: more commits than this (default: 50)")
        ->check(CLI::NonNegativeNumber);
    replicate_cmd->add_option("--quantiles", replicate_args.quantiles,
                              "RQ2 grouping quantiles (default: 0.25,0.75)");
    replicate_cmd->add_option("--min-dev-commits",
                              replicate_args.rq2_options.min_dev_commits,
                              "RQ2 minimum commits per developer per group (default: 10)")
        ->check(CLI::PositiveNumber);
    replicate_cmd->add_option("--bh-scope", replicate_args.bh_scope,
                              "RQ2 Benjamini-Hochberg scope (default: cell)")
        ->check(CLI::IsMember({"cell", "global"}));
    replicate_cmd->add_flag("--svg", replicate_args.svg, "Also write SVG charts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (measure->parsed()) {
            run_measure(measure_args);
        } else if (mine->parsed()) {
            run_mine(mine_args);
        } else if (rq1_cmd->parsed()) {
            validate_alpha(rq1_args.options.alpha);
            run_rq1(rq1_args);
        } else if (rq2_cmd->parsed()) {
            run_rq2(rq2_args);
        } else if (plan_cmd->parsed()) {
            if (plan_args.strata.empty()) plan_args.strata = {1, 2, 3, 4, 5};
            run_plan(plan_args);
        } else if (replicate_cmd->parsed()) {
            replicate_args.rq2_options.alpha = replicate_args.rq1_options.alpha;
            run_replicate(replicate_args);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace cqmine
