#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace cqmine {

// A compilation-free lexer for C source.  It never fails: malformed input
// degrades gracefully (unterminated literals end at the newline or EOF, stray
// bytes are skipped) and problems are tallied in LexDiagnostics.

enum class TokenKind : std::uint8_t {
    Identifier,    // plain identifier (not a C keyword)
    Keyword,       // one of the C11 keywords
    DirectiveName, // the name token right after a directive-introducing '#'
    Number,        // preprocessing number (integer/float, any base)
    String,        // string literal, including the quotes
    CharLit,       // character literal, including the quotes
    HeaderName,    // <...> path of an #include
    Operator,      // punctuator/operator, longest-match
};

struct Token {
    TokenKind kind;
    std::uint32_t begin;      // byte offset of first byte
    std::uint32_t end;        // one past last byte
    std::uint32_t line;       // 1-based physical line of the first byte
    std::uint32_t end_line;   // line of the last byte (literals can span lines)
    std::uint32_t directive;  // 1-based directive id, 0 when outside directives
    bool first_on_line;       // no earlier token starts or ends on `line`
    bool last_on_line;        // no later token begins on `end_line`
};

struct LexDiagnostics {
    std::uint64_t stray_bytes = 0;            // bytes no rule matched, skipped
    std::uint64_t unterminated_literals = 0;  // string/char cut by newline/EOF
    std::uint64_t unterminated_comments = 0;  // block comment cut by EOF
};

struct TokenStream {
    std::string_view source;       // the buffer the offsets index into
    std::vector<Token> tokens;
    // [begin, end) spans of every comment, delimiters included.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> comments;
    std::uint64_t n_comments = 0;
    std::uint64_t n_comment_chars = 0;  // bytes strictly between delimiters
    LexDiagnostics diagnostics;

    std::string_view text(const Token& t) const {
        return source.substr(t.begin, t.end - t.begin);
    }
};

// Lexes the full buffer.  `source` must outlive the returned stream.
TokenStream lex(std::string_view source);

// Token classification helpers shared by the metric and style passes.
bool is_c_keyword(std::string_view word);
bool is_flow_keyword(std::string_view word);     // if else while for do switch case default
bool is_spacing_keyword(std::string_view word);  // if while for switch return do sizeof

} // namespace cqmine
