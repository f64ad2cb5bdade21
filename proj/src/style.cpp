#include "cqmine/style.hpp"

#include <algorithm>

#include "cqmine/lexer.hpp"

namespace cqmine {

namespace {

bool is_space_byte(char c) { return c == ' ' || c == '\t'; }

constexpr std::array<std::string_view, 25> kBinaryOnlyOps = {
    "!=", "%",  "%=", "&&", "&=", "*=", "+=", "-=", "/",   "/=", "<",  "<<",
    "<<=", "<=", "=", "==", ">",  ">=", ">>", ">>=", "^",  "^=", "|",  "|=",
    "||",
};

bool is_binary_only(std::string_view w) {
    return std::find(kBinaryOnlyOps.begin(), kBinaryOnlyOps.end(), w) !=
           kBinaryOnlyOps.end();
}

// Previous token decides whether an ambiguous operator is binary/postfix:
// identifier, literal, or a closing bracket in front means so.
bool prev_suggests_binary(const TokenStream& ts, std::size_t i) {
    if (i == 0) return false;
    const Token& p = ts.tokens[i - 1];
    switch (p.kind) {
    case TokenKind::Identifier:
    case TokenKind::Number:
    case TokenKind::String:
    case TokenKind::CharLit:
    case TokenKind::HeaderName:
        return true;
    case TokenKind::Operator: {
        const std::string_view w = ts.text(p);
        return w == ")" || w == "]";
    }
    default:
        return false;
    }
}

} // namespace

const std::array<std::string_view, kStyleRuleCount>& style_rule_names() {
    static const std::array<std::string_view, kStyleRuleCount> names = {
        "binary_op_before",  "binary_op_after",
        "close_brace_before","close_brace_after",
        "comma_before",      "comma_after",
        "keyword_before",    "keyword_after",
        "open_brace_before", "open_brace_after",
        "open_square_before","open_square_after",
        "semicolon_before",  "semicolon_after",
        "struct_op_before",  "struct_op_after",
        "close_paren_before","unary_op_after",
        "close_square_before","eol_space",
    };
    return names;
}

StyleCounts count_style(const TokenStream& ts) {
    StyleCounts sc;
    const std::string_view src = ts.source;

    const auto before = [&](StyleRule r, const Token& t) {
        if (t.first_on_line || t.begin == 0) return;
        if (is_space_byte(src[t.begin - 1])) ++sc[r].a;
        else ++sc[r].b;
    };
    const auto after = [&](StyleRule r, const Token& t) {
        if (t.last_on_line || t.end >= src.size()) return;
        if (is_space_byte(src[t.end])) ++sc[r].a;
        else ++sc[r].b;
    };

    for (std::size_t i = 0; i < ts.tokens.size(); ++i) {
        const Token& t = ts.tokens[i];
        if (t.kind == TokenKind::Keyword) {
            if (is_spacing_keyword(ts.text(t))) {
                before(StyleRule::KeywordBefore, t);
                after(StyleRule::KeywordAfter, t);
            }
            continue;
        }
        if (t.kind != TokenKind::Operator) continue;
        const std::string_view w = ts.text(t);
        if (w == ";") {
            before(StyleRule::SemicolonBefore, t);
            after(StyleRule::SemicolonAfter, t);
        } else if (w == ",") {
            before(StyleRule::CommaBefore, t);
            after(StyleRule::CommaAfter, t);
        } else if (w == "{") {
            before(StyleRule::OpenBraceBefore, t);
            after(StyleRule::OpenBraceAfter, t);
        } else if (w == "}") {
            before(StyleRule::CloseBraceBefore, t);
            after(StyleRule::CloseBraceAfter, t);
        } else if (w == "[") {
            before(StyleRule::OpenSquareBefore, t);
            after(StyleRule::OpenSquareAfter, t);
        } else if (w == "]") {
            before(StyleRule::CloseSquareBefore, t);
        } else if (w == ")") {
            before(StyleRule::CloseParenBefore, t);
        } else if (w == "." || w == "->") {
            before(StyleRule::StructOpBefore, t);
            after(StyleRule::StructOpAfter, t);
        } else if (is_binary_only(w)) {
            before(StyleRule::BinaryOpBefore, t);
            after(StyleRule::BinaryOpAfter, t);
        } else if (w == "+" || w == "-" || w == "*" || w == "&") {
            if (prev_suggests_binary(ts, i)) {
                before(StyleRule::BinaryOpBefore, t);
                after(StyleRule::BinaryOpAfter, t);
            } else {
                after(StyleRule::UnaryOpAfter, t);
            }
        } else if (w == "++" || w == "--") {
            // postfix forms carry no spacing convention
            if (!prev_suggests_binary(ts, i)) after(StyleRule::UnaryOpAfter, t);
        } else if (w == "!" || w == "~") {
            after(StyleRule::UnaryOpAfter, t);
        }
        // '(', '?', ':', '#', '##', '...' carry no rule
    }

    // A space at end of a line (the b alternative cannot occur).
    std::size_t pos = 0;
    while (pos < src.size()) {
        const std::size_t nl = src.find('\n', pos);
        const std::size_t end = (nl == std::string_view::npos) ? src.size() : nl;
        if (end > pos && is_space_byte(src[end - 1]))
            ++sc[StyleRule::EolSpace].a;
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return sc;
}

double style_inconsistency(const StyleCounts& counts) {
    std::uint64_t min_sum = 0;
    std::uint64_t total = 0;
    for (const RuleCount& rc : counts.rules) {
        min_sum += std::min(rc.a, rc.b);
        total += rc.a + rc.b;
    }
    return total ? 100.0 * static_cast<double>(min_sum) / static_cast<double>(total)
                 : 0.0;
}

} // namespace cqmine
