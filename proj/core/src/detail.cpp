#include "detail.hpp"

namespace newstense::detail {

std::string word_base(const Token& t) {
  std::string s = lower_ascii(fold_accents(t.text));
  auto ends_with = [&](std::string_view suf) {
    return s.size() > suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with("'s"))
    s.resize(s.size() - 2);
  else if (ends_with("’s"))
    s.resize(s.size() - 4);
  else if (!s.empty() && s.back() == '\'')
    s.pop_back();
  return s;
}

bool has_upper(std::string_view s) {
  for (char c : s) {
    if (c >= 'A' && c <= 'Z') return true;
  }
  return false;
}

void merge_tokens(TaggedDocument& doc, size_t first, size_t last, TagKind kind) {
  Token merged;
  merged.begin = doc.tokens[first].begin;
  merged.end = doc.tokens[last].end;
  merged.text = doc.original.substr(merged.begin, merged.end - merged.begin);
  merged.kind = kind;
  doc.tokens[first] = std::move(merged);
  doc.tokens.erase(doc.tokens.begin() + static_cast<long>(first) + 1,
                   doc.tokens.begin() + static_cast<long>(last) + 1);
}

}  // namespace newstense::detail
