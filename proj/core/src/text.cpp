#include "newstense/text.hpp"

#include <array>

namespace newstense {

namespace {

constexpr std::array<std::string_view, 9> kTagNames = {
    "", "TICKER", "OTHER", "NUM", "PERC", "DATE", "NAME", "LOC", "ABB"};

bool ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

// Decodes one UTF-8 codepoint at s[i]; on malformed input consumes one byte.
uint32_t decode_cp(std::string_view s, size_t i, size_t& len) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    len = 1;
    return c;
  }
  uint32_t cp;
  size_t cont;
  if ((c & 0xE0) == 0xC0) {
    cp = c & 0x1F;
    cont = 1;
  } else if ((c & 0xF0) == 0xE0) {
    cp = c & 0x0F;
    cont = 2;
  } else if ((c & 0xF8) == 0xF0) {
    cp = c & 0x07;
    cont = 3;
  } else {
    len = 1;
    return 0xFFFD;
  }
  for (size_t k = 1; k <= cont; ++k) {
    if (i + k >= s.size() || (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
      len = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
  }
  len = cont + 1;
  return cp;
}

bool letter_cp(uint32_t cp) {
  if (cp < 0x80) return ascii_letter(static_cast<char>(cp));
  if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
  if (cp >= 0x0370 && cp <= 0x04FF) return true;  // Greek, Cyrillic
  return false;
}

// "U.S" / "e.g": single letters separated by periods.
bool dotted_acronym(std::string_view s) {
  if (s.size() < 3) return false;
  bool saw_dot = false;
  for (size_t k = 0; k < s.size(); ++k) {
    if (k % 2 == 0) {
      if (!ascii_letter(s[k])) return false;
    } else {
      if (s[k] != '.') return false;
      saw_dot = true;
    }
  }
  return saw_dot;
}

}  // namespace

std::string_view tag_name(TagKind kind) { return kTagNames[static_cast<size_t>(kind)]; }

TagKind tag_from_name(std::string_view name) {
  for (size_t k = 1; k < kTagNames.size(); ++k) {
    if (kTagNames[k] == name) return static_cast<TagKind>(k);
  }
  return TagKind::None;
}

TaggedDocument tokenize(std::string_view text) {
  TaggedDocument doc;
  doc.original.assign(text);
  const size_t n = text.size();
  size_t i = 0;

  auto push = [&](size_t begin, size_t end, TagKind kind) {
    Token t;
    t.text.assign(text.substr(begin, end - begin));
    t.begin = static_cast<uint32_t>(begin);
    t.end = static_cast<uint32_t>(end);
    t.kind = kind;
    doc.tokens.push_back(std::move(t));
  };

  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }

    // "@TICKER@" style pre-tagged spans
    if (c == '@') {
      size_t j = i + 1;
      while (j < n && ascii_upper(text[j])) ++j;
      if (j > i + 1 && j < n && text[j] == '@') {
        TagKind k = tag_from_name(text.substr(i + 1, j - i - 1));
        if (k != TagKind::None) {
          push(i, j + 1, k);
          i = j + 1;
          continue;
        }
      }
      push(i, i + 1, TagKind::None);
      ++i;
      continue;
    }

    // Numerals: sign, digits, internal separators, %, ordinal/decade suffix.
    if (ascii_digit(c) || ((c == '+' || c == '-') && i + 1 < n && ascii_digit(text[i + 1]))) {
      size_t j = i + (ascii_digit(c) ? 0 : 1);
      while (j < n) {
        if (ascii_digit(text[j])) {
          ++j;
          continue;
        }
        char p = text[j];
        if ((p == '.' || p == ',' || p == '/' || p == '-' || p == ':') && j + 1 < n &&
            ascii_digit(text[j + 1])) {
          ++j;
          continue;
        }
        break;
      }
      if (j < n && text[j] == '%') {
        ++j;
      } else {
        size_t k = j;
        while (k < n && ascii_letter(text[k])) ++k;
        if (k - j >= 1 && k - j <= 2) {
          std::string suf = lower_ascii(text.substr(j, k - j));
          if (suf == "s" || suf == "st" || suf == "nd" || suf == "rd" || suf == "th") j = k;
        }
      }
      push(i, j, TagKind::None);
      i = j;
      continue;
    }

    size_t cplen;
    uint32_t cp = decode_cp(text, i, cplen);

    if (letter_cp(cp)) {
      size_t j = i + cplen;
      while (j < n) {
        size_t l2;
        uint32_t c2 = decode_cp(text, j, l2);
        if (letter_cp(c2) || (c2 >= '0' && c2 <= '9')) {
          j += l2;
          continue;
        }
        // joiners stay inside the word when a letter or digit follows
        if (c2 == '\'' || c2 == '-' || c2 == '.' || c2 == 0x2019) {
          size_t after = j + l2;
          if (after < n) {
            size_t l3;
            uint32_t c3 = decode_cp(text, after, l3);
            if (letter_cp(c3) || (c3 >= '0' && c3 <= '9')) {
              j = after;
              continue;
            }
          }
        }
        break;
      }
      if (j < n && text[j] == '.' && dotted_acronym(text.substr(i, j - i))) ++j;
      // Bare uppercase tag names round-trip to tag tokens.
      push(i, j, tag_from_name(text.substr(i, j - i)));
      i = j;
      continue;
    }

    // Anything else is a single punctuation codepoint.
    push(i, i + cplen, TagKind::None);
    i += cplen;
  }
  return doc;
}

std::string render(const TaggedDocument& doc) {
  std::string out;
  out.reserve(doc.original.size());
  size_t pos = 0;
  for (const Token& t : doc.tokens) {
    out.append(doc.original, pos, t.begin - pos);
    if (t.kind == TagKind::None) {
      out.append(doc.original, t.begin, t.end - t.begin);
    } else {
      out.append(tag_name(t.kind));
    }
    pos = t.end;
  }
  out.append(doc.original, pos, doc.original.size() - pos);
  return out;
}

bool is_word(const Token& t) {
  if (t.kind != TagKind::None || t.text.empty()) return false;
  size_t len;
  return letter_cp(decode_cp(t.text, 0, len));
}

bool is_numeral(const Token& t) {
  if (t.kind != TagKind::None || t.text.empty()) return false;
  if (ascii_digit(t.text[0])) return true;
  return (t.text[0] == '+' || t.text[0] == '-') && t.text.size() > 1 && ascii_digit(t.text[1]);
}

bool is_punct(const Token& t) {
  return t.kind == TagKind::None && !is_word(t) && !is_numeral(t);
}

bool is_sentence_end(const Token& t) {
  if (!is_punct(t)) return false;
  return t.text == "." || t.text == "!" || t.text == "?" || t.text == "…";
}

bool is_capitalized(const Token& t) { return !t.text.empty() && ascii_upper(t.text[0]); }

std::string lower_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  return out;
}

std::string fold_accents(std::string_view s) {
  static constexpr struct { uint32_t lo, hi; char ch; } kFold[] = {
      {0xC0, 0xC5, 'A'}, {0xC7, 0xC7, 'C'}, {0xC8, 0xCB, 'E'}, {0xCC, 0xCF, 'I'},
      {0xD0, 0xD0, 'D'}, {0xD1, 0xD1, 'N'}, {0xD2, 0xD6, 'O'}, {0xD8, 0xD8, 'O'},
      {0xD9, 0xDC, 'U'}, {0xDD, 0xDD, 'Y'}, {0xE0, 0xE5, 'a'}, {0xE7, 0xE7, 'c'},
      {0xE8, 0xEB, 'e'}, {0xEC, 0xEF, 'i'}, {0xF0, 0xF0, 'd'}, {0xF1, 0xF1, 'n'},
      {0xF2, 0xF6, 'o'}, {0xF8, 0xF8, 'o'}, {0xF9, 0xFC, 'u'}, {0xFD, 0xFD, 'y'},
      {0xFF, 0xFF, 'y'}, {0x160, 0x160, 'S'}, {0x161, 0x161, 's'},
      {0x178, 0x178, 'Y'}, {0x17D, 0x17D, 'Z'}, {0x17E, 0x17E, 'z'},
  };
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    size_t len;
    uint32_t cp = decode_cp(s, i, len);
    i += len;
    switch (cp) {
      case 0xC6: out += "AE"; continue;
      case 0xE6: out += "ae"; continue;
      case 0xDE: out += "TH"; continue;
      case 0xFE: out += "th"; continue;
      case 0xDF: out += "ss"; continue;
      case 0x152: out += "OE"; continue;
      case 0x153: out += "oe"; continue;
      default: break;
    }
    char folded = 0;
    if (cp >= 0xC0 && cp <= 0x17E) {
      for (const auto& r : kFold) {
        if (cp >= r.lo && cp <= r.hi) {
          folded = r.ch;
          break;
        }
      }
    }
    if (folded) {
      out.push_back(folded);
    } else {
      out.append(s.substr(i - len, len));
    }
  }
  return out;
}

}  // namespace newstense
