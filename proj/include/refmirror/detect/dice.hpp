#pragma once

#include <string>

namespace refmirror::detect {

/// Sørensen–Dice similarity of the token multisets of two code fragments:
/// 2·|A ∩ B| / (|A| + |B|) over lexed token texts. Two empty fragments are
/// identical (1.0). Falls back to byte-level bigrams when a fragment does
/// not lex (opaque or foreign text).
double token_dice(const std::string& a, const std::string& b);

}  // namespace refmirror::detect
