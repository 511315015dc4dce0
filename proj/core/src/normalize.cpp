#include "newstense/normalize.hpp"

#include <array>
#include <cstdlib>

#include "detail.hpp"

namespace newstense {

namespace {

// Digit prefix of a numeral, dropping ordinal/decade suffixes ("29th" -> "29").
std::string_view digit_prefix(std::string_view s) {
  size_t k = 0;
  while (k < s.size() && s[k] >= '0' && s[k] <= '9') ++k;
  return s.substr(0, k);
}

bool day_numeral(const Token& t) {
  if (!is_numeral(t)) return false;
  std::string_view d = digit_prefix(t.text);
  if (d.size() != t.text.size()) {
    // allow ordinal suffixes only
    std::string suf = lower_ascii(t.text.substr(d.size()));
    if (suf != "st" && suf != "nd" && suf != "rd" && suf != "th") return false;
  }
  if (d.empty() || d.size() > 2) return false;
  int v = std::atoi(std::string(d).c_str());
  return v >= 1 && v <= 31;
}

bool year_digits(std::string_view d) {
  if (d.size() != 4) return false;
  int v = std::atoi(std::string(d).c_str());
  return v >= 1900 && v <= 2099;
}

bool year_numeral(const Token& t) {
  if (!is_numeral(t)) return false;
  std::string_view d = digit_prefix(t.text);
  if (d.size() == t.text.size()) return year_digits(d);
  // decades: "1990s"
  return lower_ascii(t.text.substr(d.size())) == "s" && year_digits(d);
}

// Slash/dash digit patterns like 10/29/2018 or 2018-10-29.
bool digit_date(const Token& t) {
  if (!is_numeral(t)) return false;
  std::string_view s = t.text;
  if (s.find('/') == std::string_view::npos && s.find('-') == std::string_view::npos)
    return false;
  int groups = 0;
  bool has_year = false;
  size_t k = 0;
  while (k < s.size()) {
    if (s[k] == '/' || s[k] == '-') {
      ++k;
      continue;
    }
    size_t b = k;
    while (k < s.size() && s[k] >= '0' && s[k] <= '9') ++k;
    if (k == b) return false;  // something non-digit inside
    ++groups;
    if (year_digits(s.substr(b, k - b))) has_year = true;
  }
  return groups >= 2 && (has_year || groups == 3);
}

bool month_word(const Token& t) {
  static const WordSet kMonths = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december",
      "jan",     "feb",      "mar",       "apr",     "jun",      "jul",
      "aug",     "sep",      "sept",      "oct",     "nov",      "dec"};
  return is_word(t) && is_capitalized(t) && kMonths.count(lower_ascii(t.text)) > 0;
}

std::string strip_dots(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != '.') out.push_back(c);
  }
  return out;
}

}  // namespace

NormalizeStats normalize_numerics(TaggedDocument& doc) {
  NormalizeStats stats;
  auto& toks = doc.tokens;

  // Percentages first: '%' suffix, or numeral followed by "percent"/"pct".
  for (size_t i = 0; i < toks.size(); ++i) {
    if (!is_numeral(toks[i])) continue;
    if (toks[i].text.back() == '%') {
      toks[i].kind = TagKind::Perc;
    } else if (i + 1 < toks.size() && is_word(toks[i + 1])) {
      std::string nxt = lower_ascii(toks[i + 1].text);
      if (nxt == "percent" || nxt == "pct") detail::merge_tokens(doc, i, i + 1, TagKind::Perc);
    }
  }

  // Dates: month-name merges, digit patterns, standalone years.
  for (size_t i = 0; i < toks.size(); ++i) {
    if (month_word(toks[i])) {
      if (i > 0 && day_numeral(toks[i - 1])) {
        detail::merge_tokens(doc, i - 1, i, TagKind::Date);
        --i;
      } else if (i + 1 < toks.size() && (day_numeral(toks[i + 1]) || year_numeral(toks[i + 1]))) {
        detail::merge_tokens(doc, i, i + 1, TagKind::Date);
      } else {
        continue;
      }
      // "October 29 2018" with no comma: pull the year in too
      if (i + 1 < toks.size() && year_numeral(toks[i + 1])) detail::merge_tokens(doc, i, i + 1, TagKind::Date);
    } else if (toks[i].kind == TagKind::None && (year_numeral(toks[i]) || digit_date(toks[i]))) {
      toks[i].kind = TagKind::Date;
    }
  }

  // Whatever numerals remain are plain numbers.
  for (auto& t : toks) {
    if (is_numeral(t)) t.kind = TagKind::Num;
  }

  for (const auto& t : toks) {
    if (t.kind == TagKind::Num) ++stats.num;
    if (t.kind == TagKind::Perc) ++stats.perc;
    if (t.kind == TagKind::Date) ++stats.date;
  }
  if (stats.perc > 0)
    stats.notes.push_back("percent numerals tagged PERC, not folded into NUM");
  return stats;
}

namespace {

bool sentence_initial(const TaggedDocument& doc, size_t i) {
  while (i > 0) {
    const Token& prev = doc.tokens[i - 1];
    if (is_sentence_end(prev)) return true;
    if (is_punct(prev)) {
      // look through quotes and brackets
      --i;
      continue;
    }
    return false;
  }
  return true;
}

bool promotion_stopword(const std::string& base) {
  static const WordSet kStop = {
      "the",  "a",    "an",  "and", "or",      "but", "if",  "so",  "as",
      "at",   "by",   "for", "in",  "of",      "on",  "to",  "with", "while",
      "when", "then", "yet", "now", "however", "mr",  "mrs", "ms",  "dr"};
  return kStop.count(base) > 0;
}

}  // namespace

void tag_entities(TaggedDocument& doc, const LexiconSet& lex) {
  auto& toks = doc.tokens;

  // Gazetteer pass: LOC, then ABB, then NAME.
  for (size_t i = 0; i < toks.size(); ++i) {
    Token& t = toks[i];
    if (t.kind != TagKind::None || !is_word(t)) continue;
    std::string base = detail::word_base(t);
    if (is_capitalized(t) && lex.cities.count(base)) {
      t.kind = TagKind::Loc;
      continue;
    }
    if ((detail::has_upper(t.text) || t.text.find('.') != std::string::npos) &&
        lex.abbreviations.count(strip_dots(base))) {
      t.kind = TagKind::Abb;
      continue;
    }
    if (is_capitalized(t) && lex.surnames.count(base) && !lex.assets.count(base) &&
        !lex.referential_nouns.count(base)) {
      bool ok = true;
      if (sentence_initial(doc, i)) {
        ok = i + 1 < toks.size() && is_word(toks[i + 1]) && is_capitalized(toks[i + 1]);
      }
      if (ok) t.kind = TagKind::Name;
    }
  }

  // A capitalized unknown word directly before a confirmed name is part of it.
  for (size_t i = 1; i < toks.size(); ++i) {
    if (toks[i].kind != TagKind::Name) continue;
    Token& prev = toks[i - 1];
    if (prev.kind != TagKind::None || !is_word(prev) || !is_capitalized(prev)) continue;
    std::string base = detail::word_base(prev);
    if (promotion_stopword(base) || month_word(prev)) continue;
    if (lex.surnames.count(base) || lex.cities.count(base) || lex.assets.count(base) ||
        lex.abbreviations.count(strip_dots(base)) || lex.referential_nouns.count(base))
      continue;
    prev.kind = TagKind::Name;
  }

  // Adjacent name tokens are one person: collapse into a single tag.
  for (size_t i = 0; i + 1 < toks.size();) {
    if (toks[i].kind == TagKind::Name && toks[i + 1].kind == TagKind::Name) {
      detail::merge_tokens(doc, i, i + 1, TagKind::Name);
    } else {
      ++i;
    }
  }
}

std::string scrub_for_ngrams(const TaggedDocument& doc) {
  std::string out;
  out.reserve(doc.original.size());
  for (const Token& t : doc.tokens) {
    std::string piece;
    if (t.kind != TagKind::None) {
      piece = tag_name(t.kind);
    } else if (is_punct(t)) {
      continue;
    } else {
      std::string folded = fold_accents(t.text);
      for (size_t k = 0; k < folded.size();) {
        char c = folded[k];
        if (c == '.' || c == '\'' || c == '-' || c == '@' || c == '#') {
          ++k;
          continue;
        }
        if (static_cast<unsigned char>(c) == 0xE2 && k + 2 < folded.size() &&
            static_cast<unsigned char>(folded[k + 1]) == 0x80 &&
            static_cast<unsigned char>(folded[k + 2]) == 0x99) {
          k += 3;  // curly apostrophe
          continue;
        }
        piece.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
        ++k;
      }
    }
    if (piece.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += piece;
  }
  return out;
}

}  // namespace newstense
