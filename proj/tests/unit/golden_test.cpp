#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cqmine/metrics.hpp"
#include "cqmine/style.hpp"

namespace {

std::string data_path(const std::string& name) {
    return std::string(CQMINE_TEST_DATA_DIR) + "/golden/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing fixture: " << path);
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

// Expected derived values are stored as "num/den" rationals and evaluated
// with the same double division the implementation performs, so comparisons
// below use zero tolerance.
double eval_rational(const std::string& text) {
    const size_t slash = text.find('/');
    REQUIRE(slash != std::string::npos);
    const double num = static_cast<double>(std::stoull(text.substr(0, slash)));
    const double den = static_cast<double>(std::stoull(text.substr(slash + 1)));
    return num / den;
}

// Independent comment stripper: a deliberately separate state machine used to
// cross-check the lexer's comment accounting.
struct CommentScan {
    std::uint64_t comments = 0;
    std::uint64_t interior_bytes = 0;
};

CommentScan scan_comments(const std::string& src) {
    CommentScan out;
    enum { Code, Slash, Block, BlockStar, Line, Str, StrEsc, Chr, ChrEsc } state = Code;
    for (size_t i = 0; i < src.size(); ++i) {
        const char c = src[i];
        switch (state) {
            case Code:
                if (c == '/') state = Slash;
                else if (c == '"') state = Str;
                else if (c == '\'') state = Chr;
                break;
            case Slash:
                if (c == '*') { state = Block; ++out.comments; }
                else if (c == '/') { state = Line; ++out.comments; }
                else if (c == '"') state = Str;
                else if (c == '\'') state = Chr;
                else if (c != '/') state = Code;
                break;
            case Block:
                if (c == '*') state = BlockStar;
                else ++out.interior_bytes;
                break;
            case BlockStar:
                if (c == '/') state = Code;
                else {
                    // the '*' we held back was interior after all
                    ++out.interior_bytes;
                    if (c == '*') state = BlockStar;
                    else { ++out.interior_bytes; state = Block; }
                }
                break;
            case Line:
                if (c == '\\' && i + 1 < src.size() && src[i + 1] == '\n') {
                    out.interior_bytes += 2;
                    ++i;
                } else if (c == '\n') state = Code;
                else ++out.interior_bytes;
                break;
            case Str:
                if (c == '\\') state = StrEsc;
                else if (c == '"' || c == '\n') state = Code;
                break;
            case StrEsc: state = Str; break;
            case Chr:
                if (c == '\\') state = ChrEsc;
                else if (c == '\'' || c == '\n') state = Code;
                break;
            case ChrEsc: state = Chr; break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("golden corpus matches the hand-counted oracle on every field") {
    std::ifstream oracle(data_path("expected.tsv"));
    REQUIRE_MESSAGE(oracle.good(), "missing expected.tsv");
    std::string line;
    REQUIRE(std::getline(oracle, line));
    const std::vector<std::string> header = split(line, '\t');
    REQUIRE(header.size() == 62);
    REQUIRE(header[0] == "name");

    // 1 name + 12 raw + 9 derived + 40 style
    const auto& field_names = cqmine::record_field_names();
    for (size_t i = 0; i < field_names.size(); ++i) {
        REQUIRE(header[i + 1] == field_names[i]);
    }

    int rows = 0;
    while (std::getline(oracle, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line, '\t');
        REQUIRE(cells.size() == 62);
        const std::string& name = cells[0];
        CAPTURE(name);

        const std::string source = read_file(data_path(name));
        const cqmine::FileRecord record = cqmine::analyze_source(source);
        const cqmine::SourceMetrics& m = record.metrics;

        const std::uint64_t raw[12] = {
            m.n_statements,  m.n_chars,        m.n_comment_chars,
            m.n_comments,    m.n_functions,    m.n_lines,
            m.n_gotos,       m.n_questionable_words, m.n_identifiers_unique,
            m.sum_unique_identifier_len, m.sum_nesting, m.n_nested_lines};
        for (int i = 0; i < 12; ++i) {
            INFO("raw field ", header[i + 1]);
            CHECK(raw[i] == std::stoull(cells[i + 1]));
        }

        const double derived[9] = {m.cd, m.cs, m.fs, m.gd, m.il, m.ll, m.qd, m.sn, m.si};
        for (int i = 0; i < 9; ++i) {
            INFO("derived field ", header[i + 13]);
            CHECK(derived[i] == eval_rational(cells[i + 13]));  // zero tolerance
        }

        for (size_t r = 0; r < cqmine::kStyleRuleCount; ++r) {
            const cqmine::RuleCount& rc = record.style[static_cast<cqmine::StyleRule>(r)];
            INFO("style rule ", cqmine::style_rule_names()[r]);
            CHECK(rc.a == std::stoull(cells[22 + 2 * r]));
            CHECK(rc.b == std::stoull(cells[23 + 2 * r]));
        }
        ++rows;
    }
    CHECK(rows == 20);
}

TEST_CASE("comment accounting agrees with an independent stripper on the corpus") {
    const char* names[] = {
        "g01_empty.c",        "g02_minimal_main.c",  "g03_todo_comment.c",
        "g04_line_comments.c", "g05_functions_macros.c", "g06_nesting.c",
        "g07_goto.c",         "g08_mixed_style.c",   "g09_comments_mix.c",
        "g10_strings.c",      "g11_trailing_space.c", "g12_questionable.c",
        "g13_uniform_gnu.c",  "g14_uniform_google.c", "g15_struct_access.c",
        "g16_do_switch.c",    "g17_directives.c",    "g19_no_newline.c",
        "g20_unary.c"};
    for (const char* name : names) {
        CAPTURE(name);
        const std::string source = read_file(data_path(name));
        const cqmine::SourceMetrics m = cqmine::compute_metrics(source);
        const CommentScan reference = scan_comments(source);
        CHECK(m.n_comments == reference.comments);
        CHECK(m.n_comment_chars == reference.interior_bytes);
    }
}
