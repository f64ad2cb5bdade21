#include "cqmine/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <unordered_set>

#include "cqmine/lexer.hpp"

namespace cqmine {

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

std::uint64_t count_lines(std::string_view src) {
    std::uint64_t lines =
        static_cast<std::uint64_t>(std::count(src.begin(), src.end(), '\n'));
    if (!src.empty() && src.back() != '\n') ++lines;  // ragged final line
    return lines;
}

// ';' outside for-headers plus one per flow keyword.
std::uint64_t count_statements(const TokenStream& ts) {
    std::uint64_t count = 0;
    bool await_for_paren = false;
    int for_paren_depth = 0;
    for (const Token& t : ts.tokens) {
        if (t.kind == TokenKind::Keyword) {
            const std::string_view w = ts.text(t);
            if (is_flow_keyword(w)) ++count;
            await_for_paren = (w == "for");
            continue;
        }
        if (t.kind == TokenKind::Operator) {
            const std::string_view w = ts.text(t);
            if (for_paren_depth > 0) {
                if (w == "(") ++for_paren_depth;
                else if (w == ")") --for_paren_depth;
                // semicolons inside the header are loop punctuation, not statements
                await_for_paren = false;
                continue;
            }
            if (await_for_paren && w == "(") {
                for_paren_depth = 1;
                await_for_paren = false;
                continue;
            }
            await_for_paren = false;
            if (w == ";") ++count;
            continue;
        }
        await_for_paren = false;
    }
    return count;
}

std::uint64_t count_gotos(const TokenStream& ts) {
    std::uint64_t count = 0;
    for (const Token& t : ts.tokens) {
        if (t.kind == TokenKind::Keyword && ts.text(t) == "goto") ++count;
    }
    return count;
}

void census_identifiers(const TokenStream& ts, std::uint64_t& unique,
                        std::uint64_t& sum_len) {
    std::unordered_set<std::string_view> seen;
    for (const Token& t : ts.tokens) {
        if (t.kind != TokenKind::Identifier) continue;
        if (seen.insert(ts.text(t)).second) sum_len += t.end - t.begin;
    }
    unique = seen.size();
}

// Per-line nesting: minimum brace depth over the line's extent, where only
// braces inside real function bodies (delimiters included) move the depth.
void measure_nesting(const TokenStream& ts, const std::vector<FunctionSpan>& spans,
                     std::uint64_t& sum_nesting, std::uint64_t& nested_lines) {
    std::vector<std::pair<std::uint32_t, int>> events;
    std::size_t span_idx = 0;
    for (const Token& t : ts.tokens) {
        if (t.directive != 0 || t.kind != TokenKind::Operator) continue;
        if (t.end - t.begin != 1) continue;
        const char c = ts.source[t.begin];
        if (c != '{' && c != '}') continue;
        while (span_idx < spans.size() &&
               (spans[span_idx].is_macro || t.begin >= spans[span_idx].body_end)) {
            ++span_idx;
        }
        if (span_idx >= spans.size()) break;
        const FunctionSpan& fs = spans[span_idx];
        if (t.begin < fs.body_begin) continue;
        events.emplace_back(t.begin, c == '{' ? 1 : -1);
    }

    const std::string_view src = ts.source;
    std::size_t pos = 0;
    std::size_t e = 0;
    int depth = 0;
    while (pos < src.size()) {
        std::size_t nl = src.find('\n', pos);
        const std::size_t line_end = (nl == std::string_view::npos) ? src.size() : nl;
        int min_depth = depth;
        while (e < events.size() && events[e].first < line_end) {
            depth += events[e].second;
            min_depth = std::min(min_depth, depth);
            ++e;
        }
        if (min_depth >= 1) {
            ++nested_lines;
            sum_nesting += static_cast<std::uint64_t>(min_depth);
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

double ratio(std::uint64_t num, std::uint64_t den) {
    return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double percent(std::uint64_t num, std::uint64_t den) {
    return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

} // namespace

const std::vector<std::string>& questionable_word_list() {
    static const std::vector<std::string> words = {
        "bugbug", "buggy",   "bullshit", "crap",    "crash",   "damn",
        "damned", "doom",    "doomed",   "fixme",   "fuck",    "fucker",
        "fucking","hack",    "hacked",   "hackery", "hacks",   "hell",
        "kludge", "kludges", "lame",     "lameness","poop",    "screwed",
        "screws", "shit",    "shits",    "suck",    "sucks",   "todo",
        "xxx",
    };
    return words;
}

std::uint64_t count_questionable_words(std::string_view source) {
    static const std::unordered_set<std::string> lookup(
        questionable_word_list().begin(), questionable_word_list().end());
    std::uint64_t count = 0;
    std::size_t i = 0;
    const std::size_t n = source.size();
    std::string word;
    while (i < n) {
        if (!is_word_char(source[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && is_word_char(source[j])) ++j;
        if (j - i <= 8) {  // longest listed word has 8 characters
            word.clear();
            for (std::size_t k = i; k < j; ++k) word.push_back(lower(source[k]));
            if (lookup.count(word)) ++count;
        }
        i = j;
    }
    return count;
}

std::vector<FunctionSpan> extract_functions(const TokenStream& ts,
                                            MetricDiagnostics* diag) {
    std::vector<FunctionSpan> spans;
    const auto& toks = ts.tokens;
    const std::size_t n = toks.size();

    // Function-like macros: `#define NAME(` with the paren glued to the name.
    for (std::size_t i = 0; i + 2 < n; ++i) {
        if (toks[i].kind != TokenKind::DirectiveName || ts.text(toks[i]) != "define")
            continue;
        const Token& name = toks[i + 1];
        const Token& paren = toks[i + 2];
        if (name.kind != TokenKind::Identifier) continue;
        if (paren.kind != TokenKind::Operator || ts.text(paren) != "(") continue;
        if (name.end != paren.begin) continue;
        const std::uint32_t id = toks[i].directive;
        std::size_t first = i;
        while (first > 0 && toks[first - 1].directive == id) --first;
        std::size_t last = i;
        while (last + 1 < n && toks[last + 1].directive == id) ++last;
        FunctionSpan fs;
        fs.is_macro = true;
        fs.name_begin = name.begin;
        fs.name_end = name.end;
        fs.begin = toks[first].begin;
        fs.end = toks[last].end;
        spans.push_back(fs);
    }

    // Real definitions: identifier + balanced parens + '{' at file scope.
    std::vector<std::size_t> code;
    code.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (toks[i].directive == 0) code.push_back(i);
    }
    const auto op_text = [&](std::size_t k) -> std::string_view {
        const Token& t = toks[code[k]];
        return t.kind == TokenKind::Operator ? ts.text(t) : std::string_view{};
    };
    int depth = 0;
    std::size_t k = 0;
    while (k < code.size()) {
        const std::string_view w = op_text(k);
        if (depth == 0 && w == "(" && k > 0 &&
            toks[code[k - 1]].kind == TokenKind::Identifier) {
            // match the parameter list
            std::size_t j = k;
            int pd = 0;
            for (; j < code.size(); ++j) {
                const std::string_view u = op_text(j);
                if (u == "(") ++pd;
                else if (u == ")" && --pd == 0) break;
            }
            if (j < code.size() && j + 1 < code.size() && op_text(j + 1) == "{") {
                const Token& name = toks[code[k - 1]];
                std::size_t m = j + 1;
                int bd = 0;
                bool closed = false;
                for (; m < code.size(); ++m) {
                    const std::string_view u = op_text(m);
                    if (u == "{") ++bd;
                    else if (u == "}" && --bd == 0) {
                        closed = true;
                        break;
                    }
                }
                FunctionSpan fs;
                fs.name_begin = name.begin;
                fs.name_end = name.end;
                fs.begin = name.begin;
                fs.body_begin = toks[code[j + 1]].begin;
                if (closed) {
                    fs.body_end = toks[code[m]].end;
                } else {
                    fs.body_end = static_cast<std::uint32_t>(ts.source.size());
                    if (diag) ++diag->unbalanced_braces;
                }
                fs.end = fs.body_end;
                spans.push_back(fs);
                if (!closed) break;
                k = m + 1;
                continue;
            }
        }
        if (w == "{") ++depth;
        else if (w == "}") depth = std::max(0, depth - 1);
        ++k;
    }

    std::sort(spans.begin(), spans.end(),
              [](const FunctionSpan& a, const FunctionSpan& b) {
                  return a.begin < b.begin;
              });
    return spans;
}

FileRecord analyze_source(std::string_view source) {
    FileRecord rec;
    const TokenStream ts = lex(source);

    rec.diagnostics.stray_bytes = ts.diagnostics.stray_bytes;
    rec.diagnostics.unterminated_literals = ts.diagnostics.unterminated_literals;
    rec.diagnostics.unterminated_comments = ts.diagnostics.unterminated_comments;

    SourceMetrics& m = rec.metrics;
    m.n_chars = source.size();
    m.n_lines = count_lines(source);
    m.n_comments = ts.n_comments;
    m.n_comment_chars = ts.n_comment_chars;
    m.n_statements = count_statements(ts);
    m.n_gotos = count_gotos(ts);
    m.n_questionable_words = count_questionable_words(source);
    census_identifiers(ts, m.n_identifiers_unique, m.sum_unique_identifier_len);

    const std::vector<FunctionSpan> spans = extract_functions(ts, &rec.diagnostics);
    m.n_functions = spans.size();
    measure_nesting(ts, spans, m.sum_nesting, m.n_nested_lines);

    rec.style = count_style(ts);

    m.cd = percent(m.n_comments, m.n_statements);
    m.cs = ratio(m.n_comment_chars, m.n_comments);
    m.fs = ratio(m.n_statements, m.n_functions);
    m.gd = percent(m.n_gotos, m.n_statements);
    m.il = ratio(m.sum_unique_identifier_len, m.n_identifiers_unique);
    m.ll = ratio(m.n_chars, m.n_lines);
    m.qd = percent(m.n_questionable_words, m.n_lines);
    m.sn = ratio(m.sum_nesting, m.n_nested_lines);
    m.si = style_inconsistency(rec.style);
    return rec;
}

SourceMetrics compute_metrics(std::string_view source) {
    return analyze_source(source).metrics;
}

const std::vector<std::string>& record_field_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v = {
            "n_statements", "n_chars", "n_comment_chars", "n_comments",
            "n_functions", "n_lines", "n_gotos", "n_questionable_words",
            "n_identifiers_unique", "sum_unique_identifier_len", "sum_nesting",
            "n_nested_lines", "cd", "cs", "fs", "gd", "il", "ll", "qd", "sn",
            "si",
        };
        for (std::string_view rule : style_rule_names()) {
            v.push_back(std::string(rule) + "_a");
            v.push_back(std::string(rule) + "_b");
        }
        return v;
    }();
    return names;
}

std::string format_double(double v) {
    std::array<char, 64> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

std::string format_record(const FileRecord& rec) {
    const SourceMetrics& m = rec.metrics;
    std::string out;
    out.reserve(512);
    const auto add_u = [&](std::uint64_t v) {
        if (!out.empty()) out.push_back('\t');
        out += std::to_string(v);
    };
    const auto add_d = [&](double v) {
        out.push_back('\t');
        out += format_double(v);
    };
    add_u(m.n_statements);
    add_u(m.n_chars);
    add_u(m.n_comment_chars);
    add_u(m.n_comments);
    add_u(m.n_functions);
    add_u(m.n_lines);
    add_u(m.n_gotos);
    add_u(m.n_questionable_words);
    add_u(m.n_identifiers_unique);
    add_u(m.sum_unique_identifier_len);
    add_u(m.sum_nesting);
    add_u(m.n_nested_lines);
    add_d(m.cd);
    add_d(m.cs);
    add_d(m.fs);
    add_d(m.gd);
    add_d(m.il);
    add_d(m.ll);
    add_d(m.qd);
    add_d(m.sn);
    add_d(m.si);
    for (const RuleCount& rc : rec.style.rules) {
        add_u(rc.a);
        add_u(rc.b);
    }
    return out;
}

} // namespace cqmine
