#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "cqmine/analysis.hpp"
#include "cqmine/metrics.hpp"
#include "cqmine/sampler.hpp"
#include "cqmine/stats.hpp"
#include "cqmine/style.hpp"
#include "cqmine/version.hpp"

namespace py = pybind11;

namespace {

py::dict measure_to_dict(const std::string& source) {
    const cqmine::FileRecord record = cqmine::analyze_source(source);
    const cqmine::SourceMetrics& m = record.metrics;
    py::dict out;
    out["n_statements"] = m.n_statements;
    out["n_chars"] = m.n_chars;
    out["n_comment_chars"] = m.n_comment_chars;
    out["n_comments"] = m.n_comments;
    out["n_functions"] = m.n_functions;
    out["n_lines"] = m.n_lines;
    out["n_gotos"] = m.n_gotos;
    out["n_questionable_words"] = m.n_questionable_words;
    out["n_identifiers_unique"] = m.n_identifiers_unique;
    out["sum_unique_identifier_len"] = m.sum_unique_identifier_len;
    out["sum_nesting"] = m.sum_nesting;
    out["n_nested_lines"] = m.n_nested_lines;
    out["cd"] = m.cd;
    out["cs"] = m.cs;
    out["fs"] = m.fs;
    out["gd"] = m.gd;
    out["il"] = m.il;
    out["ll"] = m.ll;
    out["qd"] = m.qd;
    out["sn"] = m.sn;
    out["si"] = m.si;
    const auto& rule_names = cqmine::style_rule_names();
    for (std::size_t r = 0; r < cqmine::kStyleRuleCount; ++r) {
        const cqmine::RuleCount& count =
            record.style[static_cast<cqmine::StyleRule>(r)];
        out[py::str(std::string(rule_names[r]) + "_a")] = count.a;
        out[py::str(std::string(rule_names[r]) + "_b")] = count.b;
    }
    return out;
}

py::list plan_to_list(const std::vector<std::pair<int, long long>>& counts,
                      long long n_target) {
    std::vector<cqmine::StratumCount> strata;
    strata.reserve(counts.size());
    for (const auto& [index, projects] : counts) {
        strata.push_back({index, projects});
    }
    py::list out;
    for (const cqmine::StratumPlan& stratum : cqmine::plan_strata(strata, n_target)) {
        py::dict entry;
        entry["index"] = stratum.index;
        entry["projects"] = stratum.projects;
        entry["total_engagements"] = stratum.total_engagements;
        entry["n_select"] = stratum.n_select;
        out.append(entry);
    }
    return out;
}

py::dict inclusion_to_dict(const std::string& required_language,
                           std::optional<long long> stars, std::optional<long long> forks,
                           std::optional<std::string> language,
                           const std::vector<long long>& half_year_commits) {
    cqmine::RepoDescriptor repo;
    repo.stars = stars;
    repo.forks = forks;
    repo.language = std::move(language);
    repo.half_year_commits = half_year_commits;
    const cqmine::InclusionReport report = cqmine::check_inclusion(repo, required_language);
    py::dict out;
    out["popularity"] = cqmine::verdict_name(report.popularity);
    out["language"] = cqmine::verdict_name(report.language);
    out["continuity"] = cqmine::verdict_name(report.continuity);
    out["overall"] = cqmine::verdict_name(report.overall());
    out["reasons"] = report.reasons;
    return out;
}

}  // namespace

PYBIND11_MODULE(_cqmine, module) {
    module.doc() = "Lexical C code-quality measurement and history analysis";
    module.attr("__version__") = cqmine::kVersion;

    module.def("measure", &measure_to_dict, py::arg("source"),
               "Measure one C source string; returns a field-name -> value dict.");
    module.def("record_field_names", [] { return cqmine::record_field_names(); },
               "Column order of the measurement record.");
    module.def("analysis_metric_names",
               [] {
                   const auto& names = cqmine::analysis_metric_names();
                   return std::vector<std::string>(names.begin(), names.end());
               },
               "The eleven metrics analysed in the research questions.");
    module.def("style_rule_names",
               [] {
                   std::vector<std::string> names;
                   for (std::string_view name : cqmine::style_rule_names()) {
                       names.emplace_back(name);
                   }
                   return names;
               },
               "The twenty two-sided style rules, canonical order.");

    module.def(
        "acf",
        [](const std::vector<double>& series, std::size_t max_lag) {
            return cqmine::stats::acf(series, max_lag);
        },
        py::arg("series"), py::arg("max_lag"),
        "Sample autocorrelation at lags 1..max_lag.");
    module.def(
        "ljung_box",
        [](const std::vector<double>& rho, std::size_t n, std::size_t h) {
            const cqmine::stats::LjungBoxResult result = cqmine::stats::ljung_box(rho, n, h);
            return py::make_tuple(result.q, result.p);
        },
        py::arg("rho"), py::arg("n"), py::arg("h"),
        "Ljung-Box (Q, p) over the first h autocorrelations of a length-n series.");
    module.def(
        "empirical_quantile",
        [](std::vector<double> values, double q) {
            return cqmine::stats::empirical_quantile(std::move(values), q);
        },
        py::arg("values"), py::arg("q"),
        "Linear-interpolation (R type 7) empirical quantile.");
    module.def(
        "ks_two_sample",
        [](std::vector<double> x, std::vector<double> y) {
            const cqmine::stats::KsResult result =
                cqmine::stats::ks_two_sample(std::move(x), std::move(y));
            return py::make_tuple(result.d, result.p);
        },
        py::arg("x"), py::arg("y"),
        "Two-sample Kolmogorov-Smirnov (D, asymptotic p).");
    module.def(
        "bh_adjust",
        [](const std::vector<double>& p_values) { return cqmine::stats::bh_adjust(p_values); },
        py::arg("p_values"), "Benjamini-Hochberg adjusted p-values, input order.");
    module.def("chi_squared_sf", &cqmine::stats::chi_squared_sf, py::arg("x"), py::arg("k"),
               "Upper tail of the chi-squared distribution with k degrees of freedom.");
    module.def("kolmogorov_sf", &cqmine::stats::kolmogorov_sf, py::arg("t"),
               "Kolmogorov limiting survival function.");

    module.def("plan_strata", &plan_to_list, py::arg("counts"), py::arg("n_target"),
               "Stratified sampling plan from (stratum_index, project_count) pairs.");
    module.def("check_inclusion", &inclusion_to_dict, py::arg("required_language"),
               py::arg("stars") = std::nullopt, py::arg("forks") = std::nullopt,
               py::arg("language") = std::nullopt,
               py::arg("half_year_commits") = std::vector<long long>{},
               "Inclusion-criteria verdicts (pass/fail/indeterminate) for one repository.");
}
