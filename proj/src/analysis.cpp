#include "cqmine/analysis.hpp"

#include <glob.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <utility>

#include "cqmine/errors.hpp"
#include "cqmine/metrics.hpp"
#include "cqmine/stats.hpp"

namespace cqmine {

namespace {

const std::array<std::string, kAnalysisMetricCount> kMetricNames = {
    "CD", "CS", "FN", "FS", "GD", "IL", "LL", "LN", "QD", "SI", "SN"};

// Timeline TSV column carrying each metric, grid order.
const std::array<std::string, kAnalysisMetricCount> kTimelineColumns = {
    "cd", "cs", "n_functions", "fs", "gd", "il", "ll", "n_lines", "qd", "si", "sn"};

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t begin = 0;
    for (;;) {
        size_t tab = line.find('\t', begin);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        fields.push_back(line.substr(begin, tab - begin));
        begin = tab + 1;
    }
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double_field(const std::string& field, const std::string& where) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw DataError(where + ": malformed numeric field '" + field + "'");
    }
    return value;
}

size_t require_column(const std::vector<std::string>& header, const std::string& name,
                      const std::string& path) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DataError(path + ": missing column '" + name + "'");
    }
    return static_cast<size_t>(it - header.begin());
}

std::string fmt_coord(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    return buffer;
}

}  // namespace

const std::array<std::string, kAnalysisMetricCount>& analysis_metric_names() {
    return kMetricNames;
}

std::vector<std::string> resolve_timeline_inputs(const std::vector<std::string>& patterns) {
    std::vector<std::string> paths;
    for (const std::string& pattern : patterns) {
        std::error_code ec;
        if (std::filesystem::is_directory(pattern, ec)) {
            for (const auto& entry : std::filesystem::directory_iterator(pattern)) {
                if (!entry.is_regular_file()) continue;
                const std::string name = entry.path().filename().string();
                if (name.size() > 13 &&
                    name.compare(name.size() - 13, 13, ".timeline.tsv") == 0) {
                    paths.push_back(entry.path().string());
                }
            }
            continue;
        }
        glob_t matches;
        int rc = ::glob(pattern.c_str(), 0, nullptr, &matches);
        if (rc == 0) {
            for (size_t i = 0; i < matches.gl_pathc; ++i) {
                paths.emplace_back(matches.gl_pathv[i]);
            }
        }
        ::globfree(&matches);
    }
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    if (paths.empty()) {
        std::string joined;
        for (size_t i = 0; i < patterns.size(); ++i) {
            if (i > 0) joined += ", ";
            joined += patterns[i];
        }
        throw DataError("no input timelines match: " + joined);
    }
    return paths;
}

std::vector<FileSeries> load_timelines(const std::vector<std::string>& paths) {
    std::vector<FileSeries> series;
    std::map<std::pair<std::string, std::string>, size_t> index;

    for (const std::string& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open timeline: " + path);
        std::string line;
        if (!std::getline(in, line)) throw DataError(path + ": empty timeline file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::vector<std::string> header = split_tabs(line);

        const size_t repo_col = require_column(header, "repo", path);
        const size_t path_col = require_column(header, "path", path);
        const size_t committer_col = require_column(header, "committer", path);
        std::array<size_t, kAnalysisMetricCount> metric_col{};
        size_t min_fields = std::max({repo_col, path_col, committer_col}) + 1;
        for (int m = 0; m < kAnalysisMetricCount; ++m) {
            metric_col[m] = require_column(header, kTimelineColumns[m], path);
            min_fields = std::max(min_fields, metric_col[m] + 1);
        }

        size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const std::vector<std::string> fields = split_tabs(line);
            const std::string where = path + ":" + std::to_string(line_no);
            if (fields.size() < min_fields) {
                throw DataError(where + ": truncated row (" + std::to_string(fields.size()) +
                                " fields)");
            }
            const std::pair<std::string, std::string> key(fields[repo_col], fields[path_col]);
            auto it = index.find(key);
            if (it == index.end()) {
                it = index.emplace(key, series.size()).first;
                series.emplace_back();
                series.back().repo = key.first;
                series.back().path = key.second;
            }
            FileSeries& file = series[it->second];
            file.committers.push_back(to_lower(fields[committer_col]));
            for (int m = 0; m < kAnalysisMetricCount; ++m) {
                file.values[m].push_back(parse_double_field(fields[metric_col[m]], where));
            }
        }
    }
    return series;
}

Rq1Result rq1(const std::vector<FileSeries>& series, const Rq1Options& options) {
    Rq1Result result;
    result.max_lag = options.max_lag;
    for (auto& hits : result.hits) {
        hits.assign(static_cast<size_t>(options.max_lag), 0);
    }
    for (const FileSeries& file : series) {
        for (int m = 0; m < kAnalysisMetricCount; ++m) {
            const std::vector<double>& values = file.values[m];
            const size_t n = values.size();
            if (n <= static_cast<size_t>(options.min_commits)) continue;
            const bool constant =
                std::all_of(values.begin(), values.end(),
                            [&](double v) { return v == values.front(); });
            if (constant) continue;
            ++result.eligible[m];
            const long long effective_max_lag =
                std::min<long long>(options.max_lag, static_cast<long long>(n) - 2);
            if (effective_max_lag < 1) continue;
            const stats::SerialCorrelation sc =
                stats::serial_correlation(values, static_cast<std::size_t>(effective_max_lag));
            for (long long k = 1; k <= effective_max_lag; ++k) {
                if (sc.rho[k - 1] > options.threshold && sc.p[k - 1] < options.alpha) {
                    ++result.hits[m][k - 1];
                }
            }
        }
    }
    return result;
}

namespace {

// Per-(project, developer) commit-delta samples in the two quantile groups.
// Delta vectors are index-aligned across the 11 tested metrics, so a single
// size check decides qualification for the whole row of cells.
struct DevSamples {
    std::array<std::vector<double>, kAnalysisMetricCount> top;
    std::array<std::vector<double>, kAnalysisMetricCount> bottom;
};

}  // namespace

Rq2Result rq2(const std::vector<FileSeries>& series, const Rq2Options& options) {
    std::map<std::string, std::vector<const FileSeries*>> repos;
    for (const FileSeries& file : series) {
        repos[file.repo].push_back(&file);
    }

    // Raw KS p-values per cell, in deterministic (repo, developer) order.
    std::array<std::array<std::vector<double>, kAnalysisMetricCount>, kAnalysisMetricCount>
        cell_ps;

    for (const auto& [repo, files] : repos) {
        for (int g = 0; g < kAnalysisMetricCount; ++g) {
            std::vector<double> first_values;
            first_values.reserve(files.size());
            for (const FileSeries* file : files) {
                if (!file->values[g].empty()) first_values.push_back(file->values[g].front());
            }
            if (first_values.empty()) continue;
            const double low_cut = stats::empirical_quantile(first_values, options.q_low);
            const double high_cut = stats::empirical_quantile(first_values, options.q_high);

            std::map<std::string, DevSamples> developers;
            for (const FileSeries* file : files) {
                if (file->values[g].empty()) continue;
                const double first = file->values[g].front();
                const bool in_top = first >= high_cut;
                const bool in_bottom = first <= low_cut;
                if (in_top == in_bottom) continue;  // middle, or both groups: excluded
                for (size_t i = 1; i < file->committers.size(); ++i) {
                    DevSamples& samples = developers[file->committers[i]];
                    auto& dest = in_top ? samples.top : samples.bottom;
                    for (int t = 0; t < kAnalysisMetricCount; ++t) {
                        dest[t].push_back(file->values[t][i] - file->values[t][i - 1]);
                    }
                }
            }

            for (const auto& [developer, samples] : developers) {
                const size_t n_top = samples.top[0].size();
                const size_t n_bottom = samples.bottom[0].size();
                if (n_top < static_cast<size_t>(options.min_dev_commits) ||
                    n_bottom < static_cast<size_t>(options.min_dev_commits)) {
                    continue;
                }
                for (int t = 0; t < kAnalysisMetricCount; ++t) {
                    cell_ps[g][t].push_back(
                        stats::ks_two_sample(samples.top[t], samples.bottom[t]).p);
                }
            }
        }
    }

    Rq2Result result;
    if (!options.bh_global) {
        for (int g = 0; g < kAnalysisMetricCount; ++g) {
            for (int t = 0; t < kAnalysisMetricCount; ++t) {
                const std::vector<double> adjusted = stats::bh_adjust(cell_ps[g][t]);
                Rq2Cell& cell = result.cells[g][t];
                cell.n_developers = adjusted.size();
                cell.n_significant = static_cast<std::uint64_t>(
                    std::count_if(adjusted.begin(), adjusted.end(),
                                  [&](double p) { return p < options.alpha; }));
            }
        }
    } else {
        std::vector<double> pooled;
        for (int g = 0; g < kAnalysisMetricCount; ++g) {
            for (int t = 0; t < kAnalysisMetricCount; ++t) {
                pooled.insert(pooled.end(), cell_ps[g][t].begin(), cell_ps[g][t].end());
            }
        }
        const std::vector<double> adjusted = stats::bh_adjust(pooled);
        size_t offset = 0;
        for (int g = 0; g < kAnalysisMetricCount; ++g) {
            for (int t = 0; t < kAnalysisMetricCount; ++t) {
                Rq2Cell& cell = result.cells[g][t];
                cell.n_developers = cell_ps[g][t].size();
                for (size_t i = 0; i < cell.n_developers; ++i) {
                    if (adjusted[offset + i] < options.alpha) ++cell.n_significant;
                }
                offset += cell.n_developers;
            }
        }
    }
    return result;
}

void write_rq1_csv(const Rq1Result& result, std::ostream& out) {
    out << "metric,lag,n_files,pct_files\n";
    for (int m = 0; m < kAnalysisMetricCount; ++m) {
        for (int k = 1; k <= result.max_lag; ++k) {
            out << kMetricNames[m] << ',' << k << ',' << result.eligible[m] << ',';
            if (result.eligible[m] > 0) {
                const double pct = 100.0 * static_cast<double>(result.hits[m][k - 1]) /
                                   static_cast<double>(result.eligible[m]);
                out << format_double(pct);
            }
            out << '\n';
        }
    }
}

void write_rq2_csv(const Rq2Result& result, std::ostream& out) {
    out << "group_metric,test_metric,n_developers,pct_developers\n";
    for (int g = 0; g < kAnalysisMetricCount; ++g) {
        for (int t = 0; t < kAnalysisMetricCount; ++t) {
            const Rq2Cell& cell = result.cells[g][t];
            out << kMetricNames[g] << ',' << kMetricNames[t] << ',' << cell.n_developers
                << ',';
            if (cell.n_developers > 0) {
                const double pct = 100.0 * static_cast<double>(cell.n_significant) /
                                   static_cast<double>(cell.n_developers);
                out << format_double(pct);
            }
            out << '\n';
        }
    }
}

namespace {

const std::array<std::string, kAnalysisMetricCount> kSeriesColors = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#000000"};

std::string heat_color(double pct) {
    const double f = std::clamp(pct / 100.0, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 + f * (178.0 - 255.0)));
    const int g = static_cast<int>(std::lround(255.0 + f * (24.0 - 255.0)));
    const int b = static_cast<int>(std::lround(255.0 + f * (43.0 - 255.0)));
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
    return buffer;
}

}  // namespace

void write_rq1_svg(const Rq1Result& result, std::ostream& out) {
    const double left = 60, right = 820, top = 20, bottom = 440;
    const int max_lag = std::max(1, result.max_lag);

    auto x_of = [&](int lag) {
        if (max_lag == 1) return (left + right) / 2.0;
        return left + (lag - 1) * (right - left) / (max_lag - 1);
    };
    auto y_of = [&](double pct) { return bottom - pct / 100.0 * (bottom - top); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"560\" "
           "viewBox=\"0 0 840 560\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "  <title>Share of files with significant autocorrelation by lag</title>\n";
    out << "  <line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(bottom) << "\" x2=\""
        << fmt_coord(right) << "\" y2=\"" << fmt_coord(bottom)
        << "\" stroke=\"#333333\"/>\n";
    out << "  <line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(top) << "\" x2=\""
        << fmt_coord(left) << "\" y2=\"" << fmt_coord(bottom) << "\" stroke=\"#333333\"/>\n";
    for (int tick = 0; tick <= 100; tick += 25) {
        const double y = y_of(tick);
        out << "  <line x1=\"" << fmt_coord(left - 4) << "\" y1=\"" << fmt_coord(y)
            << "\" x2=\"" << fmt_coord(left) << "\" y2=\"" << fmt_coord(y)
            << "\" stroke=\"#333333\"/>\n";
        out << "  <text x=\"" << fmt_coord(left - 8) << "\" y=\"" << fmt_coord(y + 4)
            << "\" text-anchor=\"end\">" << tick << "</text>\n";
    }
    std::vector<int> lag_ticks = {1};
    for (int lag = 10; lag <= max_lag; lag += 10) lag_ticks.push_back(lag);
    if (max_lag > 1 && lag_ticks.back() != max_lag) lag_ticks.push_back(max_lag);
    for (int shown : lag_ticks) {
        const double x = x_of(shown);
        out << "  <line x1=\"" << fmt_coord(x) << "\" y1=\"" << fmt_coord(bottom) << "\" x2=\""
            << fmt_coord(x) << "\" y2=\"" << fmt_coord(bottom + 4)
            << "\" stroke=\"#333333\"/>\n";
        out << "  <text x=\"" << fmt_coord(x) << "\" y=\"" << fmt_coord(bottom + 18)
            << "\" text-anchor=\"middle\">" << shown << "</text>\n";
    }
    out << "  <text x=\"" << fmt_coord((left + right) / 2) << "\" y=\""
        << fmt_coord(bottom + 36) << "\" text-anchor=\"middle\">lag</text>\n";
    out << "  <text x=\"16\" y=\"" << fmt_coord((top + bottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt_coord((top + bottom) / 2) << ")\">% of eligible files</text>\n";

    for (int m = 0; m < kAnalysisMetricCount; ++m) {
        if (result.eligible[m] == 0) continue;
        std::string points;
        std::string data_values;
        for (int k = 1; k <= result.max_lag; ++k) {
            const double pct = 100.0 * static_cast<double>(result.hits[m][k - 1]) /
                               static_cast<double>(result.eligible[m]);
            if (k > 1) {
                points += ' ';
                data_values += ',';
            }
            points += fmt_coord(x_of(k)) + "," + fmt_coord(y_of(pct));
            data_values += format_double(pct);
        }
        out << "  <polyline fill=\"none\" stroke=\"" << kSeriesColors[m]
            << "\" stroke-width=\"1.5\" data-metric=\"" << kMetricNames[m]
            << "\" data-values=\"" << data_values << "\" points=\"" << points << "\"/>\n";
    }

    const double legend_y0 = bottom + 58;
    for (int m = 0; m < kAnalysisMetricCount; ++m) {
        const double lx = left + (m % 6) * 128;
        const double ly = legend_y0 + (m / 6) * 20;
        out << "  <line x1=\"" << fmt_coord(lx) << "\" y1=\"" << fmt_coord(ly - 4)
            << "\" x2=\"" << fmt_coord(lx + 18) << "\" y2=\"" << fmt_coord(ly - 4)
            << "\" stroke=\"" << kSeriesColors[m] << "\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << fmt_coord(lx + 24) << "\" y=\"" << fmt_coord(ly) << "\">"
            << kMetricNames[m] << " (n=" << result.eligible[m] << ")</text>\n";
    }
    out << "</svg>\n";
}

void write_rq2_svg(const Rq2Result& result, std::ostream& out) {
    const int cell = 44;
    const int grid_left = 96, grid_top = 72;
    const int width = grid_left + kAnalysisMetricCount * cell + 24;   // 604
    const int height = grid_top + kAnalysisMetricCount * cell + 28;   // 584

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "  <title>Developers committing differently to top vs bottom files</title>\n";
    out << "  <text x=\"" << grid_left + kAnalysisMetricCount * cell / 2
        << "\" y=\"20\" text-anchor=\"middle\">tested metric</text>\n";
    out << "  <text x=\"20\" y=\"" << grid_top + kAnalysisMetricCount * cell / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << grid_top + kAnalysisMetricCount * cell / 2 << ")\">grouping metric</text>\n";
    for (int t = 0; t < kAnalysisMetricCount; ++t) {
        out << "  <text x=\"" << grid_left + t * cell + cell / 2 << "\" y=\"" << grid_top - 10
            << "\" text-anchor=\"middle\">" << kMetricNames[t] << "</text>\n";
    }
    for (int g = 0; g < kAnalysisMetricCount; ++g) {
        out << "  <text x=\"" << grid_left - 10 << "\" y=\"" << grid_top + g * cell + cell / 2 + 4
            << "\" text-anchor=\"end\">" << kMetricNames[g] << "</text>\n";
    }

    for (int g = 0; g < kAnalysisMetricCount; ++g) {
        for (int t = 0; t < kAnalysisMetricCount; ++t) {
            const Rq2Cell& value = result.cells[g][t];
            const int x = grid_left + t * cell;
            const int y = grid_top + g * cell;
            if (value.n_developers == 0) {
                out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                    << "\" height=\"" << cell
                    << "\" fill=\"#e0e0e0\" stroke=\"#999999\" data-n=\"0\" data-pct=\"\"/>\n";
                out << "  <line x1=\"" << x << "\" y1=\"" << y + cell << "\" x2=\"" << x + cell
                    << "\" y2=\"" << y << "\" stroke=\"#999999\"/>\n";
                continue;
            }
            const double pct = 100.0 * static_cast<double>(value.n_significant) /
                               static_cast<double>(value.n_developers);
            out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << heat_color(pct)
                << "\" stroke=\"#999999\" data-n=\"" << value.n_developers << "\" data-pct=\""
                << format_double(pct) << "\"/>\n";
            char label[16];
            std::snprintf(label, sizeof(label), "%.0f", pct);
            out << "  <text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" text-anchor=\"middle\" fill=\"" << (pct > 55.0 ? "#ffffff" : "#000000")
                << "\">" << label << "</text>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace cqmine
