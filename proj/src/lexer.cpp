#include "cqmine/lexer.hpp"

#include <algorithm>
#include <array>

namespace cqmine {

namespace {

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

// Longest-match length of the C punctuator starting at s[i], 0 if none.
std::size_t match_operator(const char* s, std::size_t i, std::size_t n) {
    const char c = s[i];
    const char c1 = (i + 1 < n) ? s[i + 1] : '\0';
    const char c2 = (i + 2 < n) ? s[i + 2] : '\0';
    switch (c) {
    case '<':
        if (c1 == '<') return c2 == '=' ? 3 : 2;
        return c1 == '=' ? 2 : 1;
    case '>':
        if (c1 == '>') return c2 == '=' ? 3 : 2;
        return c1 == '=' ? 2 : 1;
    case '.':
        return (c1 == '.' && c2 == '.') ? 3 : 1;
    case '-':
        return (c1 == '>' || c1 == '-' || c1 == '=') ? 2 : 1;
    case '+':
        return (c1 == '+' || c1 == '=') ? 2 : 1;
    case '&':
        return (c1 == '&' || c1 == '=') ? 2 : 1;
    case '|':
        return (c1 == '|' || c1 == '=') ? 2 : 1;
    case '=':
    case '!':
    case '*':
    case '/':
    case '%':
    case '^':
        return c1 == '=' ? 2 : 1;
    case '#':
        return c1 == '#' ? 2 : 1;
    case '(':
    case ')':
    case '[':
    case ']':
    case '{':
    case '}':
    case ';':
    case ',':
    case '~':
    case '?':
    case ':':
        return 1;
    default:
        return 0;
    }
}

constexpr std::array<std::string_view, 44> kKeywords = {
    "_Alignas",  "_Alignof",  "_Atomic",   "_Bool",    "_Complex",
    "_Generic",  "_Imaginary","_Noreturn", "_Static_assert",
    "_Thread_local", "auto",  "break",     "case",     "char",
    "const",     "continue",  "default",   "do",       "double",
    "else",      "enum",      "extern",    "float",    "for",
    "goto",      "if",        "inline",    "int",      "long",
    "register",  "restrict",  "return",    "short",    "signed",
    "sizeof",    "static",    "struct",    "switch",   "typedef",
    "union",     "unsigned",  "void",      "volatile", "while",
};

constexpr std::array<std::string_view, 8> kFlowKeywords = {
    "case", "default", "do", "else", "for", "if", "switch", "while",
};

constexpr std::array<std::string_view, 7> kSpacingKeywords = {
    "do", "for", "if", "return", "sizeof", "switch", "while",
};

} // namespace

bool is_c_keyword(std::string_view w) {
    return std::binary_search(kKeywords.begin(), kKeywords.end(), w);
}

bool is_flow_keyword(std::string_view w) {
    return std::binary_search(kFlowKeywords.begin(), kFlowKeywords.end(), w);
}

bool is_spacing_keyword(std::string_view w) {
    return std::binary_search(kSpacingKeywords.begin(), kSpacingKeywords.end(), w);
}

TokenStream lex(std::string_view source) {
    TokenStream ts;
    ts.source = source;
    const char* s = source.data();
    const std::size_t n = source.size();

    std::size_t i = 0;
    std::uint32_t line = 1;
    bool line_blank = true;          // only whitespace/comments so far on this line
    bool in_directive = false;
    bool expect_directive_name = false;
    bool pending_header = false;     // right after `#include`
    std::uint32_t directive_id = 0;

    auto push = [&](TokenKind kind, std::size_t begin, std::size_t end,
                    std::uint32_t begin_line, std::uint32_t end_line) {
        expect_directive_name = false;
        pending_header = false;
        Token t{};
        t.kind = kind;
        t.begin = static_cast<std::uint32_t>(begin);
        t.end = static_cast<std::uint32_t>(end);
        t.line = begin_line;
        t.end_line = end_line;
        t.directive = in_directive ? directive_id : 0;
        ts.tokens.push_back(t);
        line_blank = false;
    };

    while (i < n) {
        const char c = s[i];

        if (c == '\n') {
            ++line;
            line_blank = true;
            in_directive = false;
            expect_directive_name = false;
            pending_header = false;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
            ++i;
            continue;
        }
        // Line splice: the next physical line continues this one (directives
        // stay open, and the spliced line is not a fresh line start).
        if (c == '\\' && i + 1 < n && s[i + 1] == '\n') {
            i += 2;
            ++line;
            continue;
        }
        if (c == '\\' && i + 2 < n && s[i + 1] == '\r' && s[i + 2] == '\n') {
            i += 3;
            ++line;
            continue;
        }

        if (c == '/' && i + 1 < n && s[i + 1] == '*') {
            const std::size_t begin = i;
            i += 2;
            std::uint64_t interior = 0;
            bool closed = false;
            while (i < n) {
                if (s[i] == '*' && i + 1 < n && s[i + 1] == '/') {
                    i += 2;
                    closed = true;
                    break;
                }
                if (s[i] == '\n') ++line;
                ++interior;
                ++i;
            }
            if (!closed) ++ts.diagnostics.unterminated_comments;
            ++ts.n_comments;
            ts.n_comment_chars += interior;
            ts.comments.emplace_back(static_cast<std::uint32_t>(begin),
                                     static_cast<std::uint32_t>(i));
            continue;  // comments are trivia: line_blank survives
        }
        if (c == '/' && i + 1 < n && s[i + 1] == '/') {
            const std::size_t begin = i;
            i += 2;
            std::uint64_t interior = 0;
            while (i < n && s[i] != '\n') {
                if (s[i] == '\\' && i + 1 < n && s[i + 1] == '\n') {
                    interior += 2;  // splice: comment swallows the next line too
                    i += 2;
                    ++line;
                    continue;
                }
                if (s[i] == '\\' && i + 2 < n && s[i + 1] == '\r' && s[i + 2] == '\n') {
                    interior += 3;
                    i += 3;
                    ++line;
                    continue;
                }
                ++interior;
                ++i;
            }
            ++ts.n_comments;
            ts.n_comment_chars += interior;
            ts.comments.emplace_back(static_cast<std::uint32_t>(begin),
                                     static_cast<std::uint32_t>(i));
            continue;
        }

        if (c == '"' || c == '\'') {
            const std::size_t begin = i;
            const std::uint32_t begin_line = line;
            ++i;
            bool closed = false;
            while (i < n) {
                const char d = s[i];
                if (d == '\\') {
                    if (i + 2 < n && s[i + 1] == '\r' && s[i + 2] == '\n') {
                        i += 3;
                        ++line;
                    } else if (i + 1 < n) {
                        if (s[i + 1] == '\n') ++line;
                        i += 2;
                    } else {
                        ++i;
                    }
                    continue;
                }
                if (d == c) {
                    ++i;
                    closed = true;
                    break;
                }
                if (d == '\n') break;  // ragged literal ends before the newline
                ++i;
            }
            if (!closed) ++ts.diagnostics.unterminated_literals;
            push(c == '"' ? TokenKind::String : TokenKind::CharLit, begin, i,
                 begin_line, line);
            continue;
        }

        if (pending_header && c == '<') {
            const std::size_t begin = i;
            ++i;
            while (i < n && s[i] != '>' && s[i] != '\n') ++i;
            if (i < n && s[i] == '>') ++i;
            push(TokenKind::HeaderName, begin, i, line, line);
            continue;
        }

        if (c == '#' && !in_directive && line_blank) {
            in_directive = true;
            ++directive_id;
            push(TokenKind::Operator, i, i + 1, line, line);
            expect_directive_name = true;
            ++i;
            continue;
        }

        if (is_ident_start(c)) {
            const std::size_t begin = i;
            while (i < n && is_ident_char(s[i])) ++i;
            const std::string_view word = source.substr(begin, i - begin);
            TokenKind kind;
            const bool as_name = expect_directive_name;
            if (as_name) {
                kind = TokenKind::DirectiveName;
            } else if (is_c_keyword(word)) {
                kind = TokenKind::Keyword;
            } else {
                kind = TokenKind::Identifier;
            }
            push(kind, begin, i, line, line);
            if (as_name && (word == "include" || word == "include_next")) {
                pending_header = true;
            }
            continue;
        }

        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(s[i + 1]))) {
            const std::size_t begin = i;
            ++i;
            while (i < n) {
                const char d = s[i];
                if ((d == 'e' || d == 'E' || d == 'p' || d == 'P') && i + 1 < n &&
                    (s[i + 1] == '+' || s[i + 1] == '-')) {
                    i += 2;
                    continue;
                }
                if (is_ident_char(d) || d == '.') {
                    ++i;
                    continue;
                }
                break;
            }
            push(TokenKind::Number, begin, i, line, line);
            continue;
        }

        if (const std::size_t len = match_operator(s, i, n); len > 0) {
            push(TokenKind::Operator, i, i + len, line, line);
            i += len;
            continue;
        }

        // No rule matched: skip one byte and resynchronize.
        ++ts.diagnostics.stray_bytes;
        line_blank = false;
        ++i;
    }

    for (std::size_t k = 0; k < ts.tokens.size(); ++k) {
        Token& t = ts.tokens[k];
        t.first_on_line = (k == 0) || (ts.tokens[k - 1].end_line != t.line);
        t.last_on_line =
            (k + 1 == ts.tokens.size()) || (ts.tokens[k + 1].line != t.end_line);
    }
    return ts;
}

} // namespace cqmine
