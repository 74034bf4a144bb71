#ifndef LEXATTR_UNICODE_HPP_
#define LEXATTR_UNICODE_HPP_

#include <string>
#include <string_view>

namespace lexattr::uni {

using CodePoint = char32_t;

constexpr CodePoint kReplacement = 0xFFFD;

// Lenient UTF-8 decode; malformed byte sequences become U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view cps);
void append_utf8(std::string& out, CodePoint cp);

// Character classes as the uncased WordPiece pipeline defines them:
// whitespace is ASCII blanks plus category Zs, control is Cc/Cf minus
// \t\n\r, punctuation is the four ASCII symbol ranges plus category P*.
bool is_whitespace(CodePoint cp);
bool is_control(CodePoint cp);
bool is_punctuation(CodePoint cp);
bool is_cjk_ideograph(CodePoint cp);
bool is_combining_mark(CodePoint cp);

// Lowercases one code point, appending the result (U+0130 expands to two
// code points). Covers ASCII, Latin-1 Supplement and Latin Extended-A;
// anything else passes through unchanged.
void lower_append(CodePoint cp, std::u32string& out);

// Canonical-decomposition base letter for precomposed Latin characters
// (Latin-1 Supplement and Latin Extended-A); identity elsewhere. Combined
// with dropping combining marks this implements accent stripping.
CodePoint decomposed_base(CodePoint cp);

}  // namespace lexattr::uni

#endif  // LEXATTR_UNICODE_HPP_
