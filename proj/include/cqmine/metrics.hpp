#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cqmine/style.hpp"

namespace cqmine {

struct TokenStream;

// Per-file lexical quality measurements.  Raw counts first, then the derived
// ratios; any ratio with a zero denominator is defined as 0.
struct SourceMetrics {
    std::uint64_t n_statements = 0;           // ';' outside for-headers + flow keywords
    std::uint64_t n_chars = 0;                // bytes
    std::uint64_t n_comment_chars = 0;        // bytes strictly between delimiters
    std::uint64_t n_comments = 0;
    std::uint64_t n_functions = 0;            // definitions + function-like macros
    std::uint64_t n_lines = 0;                // newline count (+1 for ragged tail)
    std::uint64_t n_gotos = 0;
    std::uint64_t n_questionable_words = 0;   // raw scan, case-insensitive
    std::uint64_t n_identifiers_unique = 0;
    std::uint64_t sum_unique_identifier_len = 0;
    std::uint64_t sum_nesting = 0;            // sum of per-line nesting depths
    std::uint64_t n_nested_lines = 0;         // lines with nesting depth >= 1

    double cd = 0;  // comment density: 100 * n_comments / n_statements
    double cs = 0;  // comment size: n_comment_chars / n_comments
    double fs = 0;  // function size: n_statements / n_functions
    double gd = 0;  // goto density: 100 * n_gotos / n_statements
    double il = 0;  // identifier length: sum_unique_identifier_len / n_identifiers_unique
    double ll = 0;  // line length: n_chars / n_lines
    double qd = 0;  // questionable-word density: 100 * n_questionable_words / n_lines
    double sn = 0;  // statement nesting: sum_nesting / n_nested_lines
    double si = 0;  // style inconsistency (percentage, <= 50); see style.hpp
};

// A function-shaped region: either a real definition (identifier + balanced
// parens + '{' body at file scope) or a function-like macro definition.
struct FunctionSpan {
    std::uint32_t name_begin = 0;
    std::uint32_t name_end = 0;
    std::uint32_t begin = 0;       // first byte of the span
    std::uint32_t end = 0;         // one past the last byte
    std::uint32_t body_begin = 0;  // offset of '{' (real functions only)
    std::uint32_t body_end = 0;    // one past matching '}' (or EOF if unbalanced)
    bool is_macro = false;
};

struct MetricDiagnostics {
    std::uint64_t unbalanced_braces = 0;  // bodies force-closed at EOF
    std::uint64_t stray_bytes = 0;
    std::uint64_t unterminated_literals = 0;
    std::uint64_t unterminated_comments = 0;
};

// Metrics + style + data-quality counters for one file.
struct FileRecord {
    SourceMetrics metrics;
    StyleCounts style;
    MetricDiagnostics diagnostics;
};

// One pass over the source: lex, measure, count style, fill derived ratios.
FileRecord analyze_source(std::string_view source);

// Convenience wrapper when only the metrics are needed.
SourceMetrics compute_metrics(std::string_view source);

// Function/macro extraction, exposed for tests and data-quality review.
std::vector<FunctionSpan> extract_functions(const TokenStream& ts,
                                            MetricDiagnostics* diag = nullptr);

// Raw scan for "questionable" words: maximal [A-Za-z0-9_]+ runs anywhere in
// the byte stream (code, comments, strings), matched case-insensitively
// against the frozen word list.
std::uint64_t count_questionable_words(std::string_view source);
const std::vector<std::string>& questionable_word_list();

// ---- serialization (the documented 61-field schema) ----

// Header names: 12 raw counts, 9 derived ratios, then 40 style columns.
const std::vector<std::string>& record_field_names();

// Tab-joined values in record_field_names() order.  Doubles are rendered via
// std::to_chars shortest round-trip form, so output is platform-stable.
std::string format_record(const FileRecord& rec);

// Shortest round-trip decimal form of a double (helper shared by emitters).
std::string format_double(double v);

} // namespace cqmine
