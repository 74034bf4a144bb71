#include "lexattr/unicode.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace lexattr::uni {

namespace {

struct Range {
  char32_t lo;
  char32_t hi;
};

bool in_ranges(CodePoint cp, const Range* ranges, std::size_t n) {
  const Range* end = ranges + n;
  auto it = std::upper_bound(ranges, end, cp,
                             [](CodePoint v, const Range& r) { return v < r.lo; });
  return it != ranges && cp <= (it - 1)->hi;
}

// Category Zs (plus the ASCII blanks handled by the caller).
constexpr Range kSpaceRanges[] = {
    {0x20, 0x20},     {0xA0, 0xA0},     {0x1680, 0x1680},
    {0x2000, 0x200A}, {0x202F, 0x202F}, {0x205F, 0x205F},
    {0x3000, 0x3000},
};

// Category Cf (format controls). Cc is handled by range checks directly.
constexpr Range kFormatRanges[] = {
    {0xAD, 0xAD},         {0x600, 0x605},       {0x61C, 0x61C},
    {0x6DD, 0x6DD},       {0x70F, 0x70F},       {0x8E2, 0x8E2},
    {0x180E, 0x180E},     {0x200B, 0x200F},     {0x202A, 0x202E},
    {0x2060, 0x2064},     {0x2066, 0x206F},     {0xFEFF, 0xFEFF},
    {0xFFF9, 0xFFFB},     {0x110BD, 0x110BD},   {0x110CD, 0x110CD},
    {0x13430, 0x13438},   {0x1BCA0, 0x1BCA3},   {0x1D173, 0x1D17A},
    {0xE0001, 0xE0001},   {0xE0020, 0xE007F},
};

// Category P* for the BMP. Legal and general English text lives in the
// ASCII, Latin-1 and General Punctuation entries; the rest are included so
// stray characters from other scripts split the same way the reference
// pipeline splits them.
constexpr Range kPunctRanges[] = {
    {0xA1, 0xA1},     {0xA7, 0xA7},     {0xAB, 0xAB},     {0xB6, 0xB7},
    {0xBB, 0xBB},     {0xBF, 0xBF},     {0x37E, 0x37E},   {0x387, 0x387},
    {0x55A, 0x55F},   {0x589, 0x58A},   {0x5BE, 0x5BE},   {0x5C0, 0x5C0},
    {0x5C3, 0x5C3},   {0x5C6, 0x5C6},   {0x5F3, 0x5F4},   {0x609, 0x60A},
    {0x60C, 0x60D},   {0x61B, 0x61B},   {0x61E, 0x61F},   {0x66A, 0x66D},
    {0x6D4, 0x6D4},   {0x700, 0x70D},   {0x7F7, 0x7F9},   {0x830, 0x83E},
    {0x85E, 0x85E},   {0x964, 0x965},   {0x970, 0x970},   {0x9FD, 0x9FD},
    {0xA76, 0xA76},   {0xAF0, 0xAF0},   {0xC77, 0xC77},   {0xC84, 0xC84},
    {0xDF4, 0xDF4},   {0xE4F, 0xE4F},   {0xE5A, 0xE5B},   {0xF04, 0xF12},
    {0xF14, 0xF14},   {0xF3A, 0xF3D},   {0xF85, 0xF85},   {0xFD0, 0xFD4},
    {0xFD9, 0xFDA},   {0x104A, 0x104F}, {0x10FB, 0x10FB}, {0x1360, 0x1368},
    {0x1400, 0x1400}, {0x166E, 0x166E}, {0x169B, 0x169C}, {0x16EB, 0x16ED},
    {0x1735, 0x1736}, {0x17D4, 0x17D6}, {0x17D8, 0x17DA}, {0x1800, 0x180A},
    {0x1944, 0x1945}, {0x1A1E, 0x1A1F}, {0x1AA0, 0x1AA6}, {0x1AA8, 0x1AAD},
    {0x1B5A, 0x1B60}, {0x1BFC, 0x1BFF}, {0x1C3B, 0x1C3F}, {0x1C7E, 0x1C7F},
    {0x1CC0, 0x1CC7}, {0x1CD3, 0x1CD3}, {0x2010, 0x2027}, {0x2030, 0x2043},
    {0x2045, 0x2051}, {0x2053, 0x205E}, {0x207D, 0x207E}, {0x208D, 0x208E},
    {0x2329, 0x232A}, {0x2768, 0x2775}, {0x27C5, 0x27C6}, {0x27E6, 0x27EF},
    {0x2983, 0x2998}, {0x29D8, 0x29DB}, {0x29FC, 0x29FD}, {0x2CF9, 0x2CFC},
    {0x2CFE, 0x2CFF}, {0x2D70, 0x2D70}, {0x2E00, 0x2E2E}, {0x2E30, 0x2E4F},
    {0x3001, 0x3003}, {0x3008, 0x3011}, {0x3014, 0x301F}, {0x3030, 0x3030},
    {0x303D, 0x303D}, {0x30A0, 0x30A0}, {0x30FB, 0x30FB}, {0xA4FE, 0xA4FF},
    {0xA60D, 0xA60F}, {0xA673, 0xA673}, {0xA67E, 0xA67E}, {0xA6F2, 0xA6F7},
    {0xA874, 0xA877}, {0xA8CE, 0xA8CF}, {0xA8F8, 0xA8FA}, {0xA8FC, 0xA8FC},
    {0xA92E, 0xA92F}, {0xA95F, 0xA95F}, {0xA9C1, 0xA9CD}, {0xA9DE, 0xA9DF},
    {0xAA5C, 0xAA5F}, {0xAADE, 0xAADF}, {0xAAF0, 0xAAF1}, {0xABEB, 0xABEB},
    {0xFD3E, 0xFD3F}, {0xFE10, 0xFE19}, {0xFE30, 0xFE52}, {0xFE54, 0xFE61},
    {0xFE63, 0xFE63}, {0xFE68, 0xFE68}, {0xFE6A, 0xFE6B}, {0xFF01, 0xFF03},
    {0xFF05, 0xFF0A}, {0xFF0C, 0xFF0F}, {0xFF1A, 0xFF1B}, {0xFF1F, 0xFF20},
    {0xFF3B, 0xFF3D}, {0xFF3F, 0xFF3F}, {0xFF5B, 0xFF5B}, {0xFF5D, 0xFF5D},
    {0xFF5F, 0xFF65},
};

constexpr Range kCjkRanges[] = {
    {0x3400, 0x4DBF},   {0x4E00, 0x9FFF},   {0xF900, 0xFAFF},
    {0x20000, 0x2A6DF}, {0x2A700, 0x2B73F}, {0x2B740, 0x2B81F},
    {0x2B820, 0x2CEAF}, {0x2F800, 0x2FA1F},
};

// Combining-mark blocks dropped by accent stripping.
constexpr Range kMarkRanges[] = {
    {0x300, 0x36F},   {0x483, 0x489},   {0x591, 0x5BD},  {0x5BF, 0x5BF},
    {0x5C1, 0x5C2},   {0x5C4, 0x5C5},   {0x5C7, 0x5C7},  {0x610, 0x61A},
    {0x64B, 0x65F},   {0x670, 0x670},   {0x6D6, 0x6DC},  {0x6DF, 0x6E4},
    {0x1AB0, 0x1AFF}, {0x1DC0, 0x1DFF}, {0x20D0, 0x20FF},
    {0xFE20, 0xFE2F},
};

// Base letters for canonically decomposable characters, Latin-1 Supplement
// (0xC0..0xFF) and Latin Extended-A (0x100..0x17F). '.' marks characters
// with no canonical decomposition.
constexpr char kLatin1Base[64 + 1] =
    "AAAAAA.CEEEEIIII"
    ".NOOOOO..UUUUY.."
    "aaaaaa.ceeeeiiii"
    ".nooooo..uuuuy.y";

constexpr char kExtABase[128 + 1] =
    "AaAaAaCcCcCcCcDd"
    "..EeEeEeEeEeGgGg"
    "GgGgHh..IiIiIiIi"
    "I...JjKk.LlLlLl."
    "...NnNnNn...OoOo"
    "Oo..RrRrRrSsSsSs"
    "SsTtTt..UuUuUuUu"
    "UuUuWwYyYZzZzZz.";

}  // namespace

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const auto n = bytes.size();
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(bytes[k]); };
  auto is_cont = [&](std::size_t k) { return k < n && (byte(k) & 0xC0) == 0x80; };
  while (i < n) {
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
      out.push_back(b0);
      i += 1;
    } else if ((b0 & 0xE0) == 0xC0 && is_cont(i + 1)) {
      CodePoint cp = (CodePoint(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
      out.push_back(cp < 0x80 ? kReplacement : cp);
      i += 2;
    } else if ((b0 & 0xF0) == 0xE0 && is_cont(i + 1) && is_cont(i + 2)) {
      CodePoint cp = (CodePoint(b0 & 0x0F) << 12) |
                     (CodePoint(byte(i + 1) & 0x3F) << 6) | (byte(i + 2) & 0x3F);
      bool bad = cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF);
      out.push_back(bad ? kReplacement : cp);
      i += 3;
    } else if ((b0 & 0xF8) == 0xF0 && is_cont(i + 1) && is_cont(i + 2) &&
               is_cont(i + 3)) {
      CodePoint cp = (CodePoint(b0 & 0x07) << 18) |
                     (CodePoint(byte(i + 1) & 0x3F) << 12) |
                     (CodePoint(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
      bool bad = cp < 0x10000 || cp > 0x10FFFF;
      out.push_back(bad ? kReplacement : cp);
      i += 4;
    } else {
      out.push_back(kReplacement);
      i += 1;
    }
  }
  return out;
}

void append_utf8(std::string& out, CodePoint cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (CodePoint cp : cps) append_utf8(out, cp);
  return out;
}

bool is_whitespace(CodePoint cp) {
  if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r') return true;
  return in_ranges(cp, kSpaceRanges, std::size(kSpaceRanges));
}

bool is_control(CodePoint cp) {
  if (cp == '\t' || cp == '\n' || cp == '\r') return false;
  if (cp < 0x20 || (cp >= 0x7F && cp <= 0x9F)) return true;
  return in_ranges(cp, kFormatRanges, std::size(kFormatRanges));
}

bool is_punctuation(CodePoint cp) {
  if ((cp >= 33 && cp <= 47) || (cp >= 58 && cp <= 64) ||
      (cp >= 91 && cp <= 96) || (cp >= 123 && cp <= 126)) {
    return true;
  }
  return in_ranges(cp, kPunctRanges, std::size(kPunctRanges));
}

bool is_cjk_ideograph(CodePoint cp) {
  return in_ranges(cp, kCjkRanges, std::size(kCjkRanges));
}

bool is_combining_mark(CodePoint cp) {
  return in_ranges(cp, kMarkRanges, std::size(kMarkRanges));
}

void lower_append(CodePoint cp, std::u32string& out) {
  if (cp >= 'A' && cp <= 'Z') {
    out.push_back(cp + 0x20);
    return;
  }
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
    out.push_back(cp + 0x20);
    return;
  }
  if (cp == 0x130) {  // LATIN CAPITAL LETTER I WITH DOT ABOVE -> i + U+0307
    out.push_back(0x69);
    out.push_back(0x307);
    return;
  }
  if (cp == 0x178) {  // LATIN CAPITAL LETTER Y WITH DIAERESIS
    out.push_back(0xFF);
    return;
  }
  if (cp >= 0x100 && cp <= 0x177) {
    // Pairs alternate (upper, lower); parity of the uppercase member flips
    // at 0x139 and back at 0x14A.
    bool upper = (cp <= 0x137 || cp >= 0x14A) ? (cp % 2 == 0)
                                              : (cp % 2 == 1 && cp != 0x148);
    if (cp == 0x138 || cp == 0x149) upper = false;
    out.push_back(upper ? cp + 1 : cp);
    return;
  }
  if (cp >= 0x179 && cp <= 0x17E) {
    out.push_back(cp % 2 == 1 ? cp + 1 : cp);
    return;
  }
  out.push_back(cp);
}

CodePoint decomposed_base(CodePoint cp) {
  if (cp >= 0xC0 && cp <= 0xFF) {
    char base = kLatin1Base[cp - 0xC0];
    return base == '.' ? cp : static_cast<CodePoint>(base);
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    char base = kExtABase[cp - 0x100];
    return base == '.' ? cp : static_cast<CodePoint>(base);
  }
  return cp;
}

}  // namespace lexattr::uni
