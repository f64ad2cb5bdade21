#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cqmine {

struct TokenStream;

// The twenty two-sided formatting rules.  Each rule counts how often the
// "space" alternative (a) and the "no space" alternative (b) were taken at the
// spots where a choice exists.  Canonical order is frozen: it defines the
// 40-column block of the output schema.
enum class StyleRule : std::size_t {
    BinaryOpBefore = 0,
    BinaryOpAfter,
    CloseBraceBefore,
    CloseBraceAfter,
    CommaBefore,
    CommaAfter,
    KeywordBefore,
    KeywordAfter,
    OpenBraceBefore,
    OpenBraceAfter,
    OpenSquareBefore,
    OpenSquareAfter,
    SemicolonBefore,
    SemicolonAfter,
    StructOpBefore,
    StructOpAfter,
    CloseParenBefore,
    UnaryOpAfter,
    CloseSquareBefore,
    EolSpace,
};

inline constexpr std::size_t kStyleRuleCount = 20;

// Snake-case rule names, indexed by StyleRule; column names are <name>_a/_b.
const std::array<std::string_view, kStyleRuleCount>& style_rule_names();

struct RuleCount {
    std::uint64_t a = 0;  // spaced alternative
    std::uint64_t b = 0;  // unspaced alternative
};

struct StyleCounts {
    std::array<RuleCount, kStyleRuleCount> rules{};

    RuleCount& operator[](StyleRule r) { return rules[static_cast<std::size_t>(r)]; }
    const RuleCount& operator[](StyleRule r) const {
        return rules[static_cast<std::size_t>(r)];
    }
};

// Counts every styling choice in the token stream.  Contexts: a before-rule
// applies when the token is not first on its line, an after-rule when it is
// not last on its line; the alternative taken is decided by the byte
// immediately adjacent to the token (space or tab => a).
StyleCounts count_style(const TokenStream& ts);

// style inconsistency = 100 * sum(min(a,b)) / sum(a+b); 0 when no contexts.
// Bounded above by 50 by construction.
double style_inconsistency(const StyleCounts& counts);

} // namespace cqmine
