#include "refmirror/detect/dice.hpp"

#include <map>
#include <vector>

#include "refmirror/lang/lexer.hpp"
#include "refmirror/support/errors.hpp"

namespace refmirror::detect {

namespace {

std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> out;
    try {
        for (const auto& t : lang::lex(text)) {
            if (t.kind == lang::TokenKind::EndOfFile) continue;
            out.push_back(t.text);
        }
    } catch (const refmirror::SyntaxError&) {
        // Byte bigrams keep the measure defined for unlexable fragments.
        out.clear();
        for (size_t i = 0; i + 1 < text.size(); ++i) out.push_back(text.substr(i, 2));
    }
    return out;
}

}  // namespace

double token_dice(const std::string& a, const std::string& b) {
    auto ta = tokens_of(a);
    auto tb = tokens_of(b);
    if (ta.empty() && tb.empty()) return 1.0;
    if (ta.empty() || tb.empty()) return 0.0;

    std::map<std::string, int> counts;
    for (const auto& t : ta) ++counts[t];
    long common = 0;
    for (const auto& t : tb) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    return 2.0 * static_cast<double>(common) /
           static_cast<double>(ta.size() + tb.size());
}

}  // namespace refmirror::detect
