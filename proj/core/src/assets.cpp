#include "newstense/assets.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "detail.hpp"

namespace newstense {

namespace {

std::vector<std::string> split_words(std::string_view name) {
  std::vector<std::string> out;
  std::istringstream in{std::string(name)};
  std::string w;
  while (in >> w) out.push_back(lower_ascii(fold_accents(w)));
  return out;
}

// True if the token sequence starting at i spells out `words`.
bool match_at(const TaggedDocument& doc, size_t i, const std::vector<std::string>& words) {
  for (size_t k = 0; k < words.size(); ++k) {
    if (i + k >= doc.tokens.size()) return false;
    const Token& t = doc.tokens[i + k];
    if (t.kind != TagKind::None || !is_word(t) || !detail::has_upper(t.text)) return false;
    if (detail::word_base(t) != words[k]) return false;
  }
  return true;
}

}  // namespace

AssetTagStats tag_assets(TaggedDocument& doc, const LexiconSet& lex,
                         std::string_view main_ticker) {
  AssetTagStats stats;

  // Every mention of the main asset first.
  std::vector<std::string> main_words = split_words(main_ticker);
  if (!main_words.empty()) {
    for (size_t i = 0; i < doc.tokens.size(); ++i) {
      if (match_at(doc, i, main_words)) {
        detail::merge_tokens(doc, i, i + main_words.size() - 1, TagKind::Ticker);
        ++stats.ticker;
      }
    }
  }

  // Multi-word lexicon entries, longest first, then single words.
  std::vector<std::vector<std::string>> multi;
  for (const auto& entry : lex.assets) {
    if (entry.find(' ') != std::string::npos) multi.push_back(split_words(entry));
  }
  std::sort(multi.begin(), multi.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });

  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    if (t.kind != TagKind::None || !is_word(t) || !detail::has_upper(t.text)) continue;
    bool matched = false;
    for (const auto& words : multi) {
      if (match_at(doc, i, words)) {
        detail::merge_tokens(doc, i, i + words.size() - 1, TagKind::Other);
        ++stats.other;
        matched = true;
        break;
      }
    }
    if (!matched && lex.assets.count(detail::word_base(t))) {
      doc.tokens[i].kind = TagKind::Other;
      ++stats.other;
    }
  }
  return stats;
}

int resolve_referential(TaggedDocument& doc, const LexiconSet& lex) {
  int resolved = 0;
  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    Token& t = doc.tokens[i];
    if (t.kind != TagKind::None || !is_word(t)) continue;
    std::string base = detail::word_base(t);
    bool referential = lex.referential_nouns.count(base) > 0;
    if (!referential && base.size() > 3 && base.back() == 's')
      referential = lex.referential_nouns.count(base.substr(0, base.size() - 1)) > 0;
    if (!referential) continue;

    int ends_crossed = 0;
    for (size_t j = i; j-- > 0;) {
      const Token& cand = doc.tokens[j];
      if (is_sentence_end(cand)) {
        if (++ends_crossed >= 2) break;  // same or previous sentence only
        continue;
      }
      if (cand.kind == TagKind::Ticker || cand.kind == TagKind::Other) {
        t.kind = cand.kind;
        t.referential = true;
        t.antecedent = static_cast<int32_t>(j);
        ++resolved;
        break;
      }
    }
  }
  return resolved;
}

}  // namespace newstense
