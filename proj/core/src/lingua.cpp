#include "newstense/lingua.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "newstense/error.hpp"

namespace newstense {

namespace {

std::string low(const Token& t) { return lower_ascii(fold_accents(t.text)); }

bool future_modal(const std::string& w) {
  return w == "will" || w == "shall" || w == "won't" || w == "shan't" || w == "'ll";
}

bool other_modal(const std::string& w) {
  return w == "can" || w == "could" || w == "may" || w == "might" || w == "must" ||
         w == "should" || w == "would";
}

// Present-tense be forms return Present, past forms Past, otherwise nullopt.
std::optional<Tense> be_tense(const std::string& w) {
  if (w == "is" || w == "are" || w == "am") return Tense::Present;
  if (w == "was" || w == "were") return Tense::Past;
  return std::nullopt;
}

bool nonfinite_be(const std::string& w) { return w == "be" || w == "been" || w == "being"; }

std::optional<Tense> have_tense(const std::string& w) {
  if (w == "has" || w == "have") return Tense::Present;
  if (w == "had") return Tense::Past;
  return std::nullopt;
}

std::optional<Tense> do_tense(const std::string& w) {
  if (w == "does" || w == "do") return Tense::Present;
  if (w == "did") return Tense::Past;
  return std::nullopt;
}

bool gerund(const std::string& w) { return w.size() > 4 && w.compare(w.size() - 3, 3, "ing") == 0; }

bool negation_or_adverb(const std::string& w) {
  static const WordSet kExtra = {"not",  "n't", "never", "also", "still",  "just",
                                 "soon", "now", "then",  "again", "even",  "yet",
                                 "already", "only", "often", "always", "perhaps"};
  if (kExtra.count(w)) return true;
  return w.size() > 3 && w.compare(w.size() - 2, 2, "ly") == 0;
}

bool determiner_or_possessive(const std::string& w) {
  static const WordSet kDet = {"the", "a",  "an",  "this", "that",  "these", "those",
                               "its", "his", "her", "their", "our", "my",   "your",
                               "each", "every", "some", "any", "no"};
  return kDet.count(w) > 0;
}

bool preposition(const std::string& w) {
  static const WordSet kPrep = {"of",   "in",   "on",      "at",      "by",     "for",
                                "with", "from", "to",      "about",   "against", "between",
                                "during", "through", "over", "under", "after",  "before",
                                "into", "near", "toward",  "towards", "without"};
  return kPrep.count(w) > 0;
}

bool conjunction_marker(const std::string& w) {
  static const WordSet kConj = {"and", "but",     "or",     "while", "whereas",
                                "although", "though", "because"};
  return kConj.count(w) > 0;
}

bool clause_comma(const Token& t) {
  return is_punct(t) && (t.text == "," || t.text == ";");
}

}  // namespace

std::string_view tense_name(Tense t) {
  switch (t) {
    case Tense::Present: return "Present";
    case Tense::Past: return "Past";
    case Tense::Future: return "Future";
  }
  return "";
}

Lingua::Lingua(const std::filesystem::path& data_dir) {
  verb_bases_ = load_word_list(data_dir / "verbs.txt");
  std::ifstream in(data_dir / "irregular_verbs.tsv");
  if (!in) throw Error("cannot open irregular verb table: " + (data_dir / "irregular_verbs.tsv").string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw Error("irregular verb rows need base<TAB>past<TAB>participle: " + line);
    std::string base = lower_ascii(line.substr(0, t1));
    std::string past = lower_ascii(line.substr(t1 + 1, t2 - t1 - 1));
    std::string part = lower_ascii(line.substr(t2 + 1));
    while (!part.empty() && (part.back() == '\r' || part.back() == ' ')) part.pop_back();
    verb_bases_.insert(base);
    irregular_past_.insert(past);
    irregular_participle_.insert(part);
  }
}

Lingua::Lingua(WordSet verb_bases, const std::vector<std::array<std::string, 3>>& irregulars)
    : verb_bases_(std::move(verb_bases)) {
  for (const auto& row : irregulars) {
    verb_bases_.insert(lower_ascii(row[0]));
    irregular_past_.insert(lower_ascii(row[1]));
    irregular_participle_.insert(lower_ascii(row[2]));
  }
}

// ---------------------------------------------------------------------------
// Verb group detection

struct GroupScanner {
  const Lingua& lx;
  const TaggedDocument& doc;

  bool in_verb_lexicon(const std::string& w) const { return lx.verb_bases_.count(w) > 0; }

  // Base form behind a 3rd-person -s inflection, if the lexicon knows it.
  bool third_person(const std::string& w) const {
    if (w.size() < 3 || w.back() != 's' || w[w.size() - 2] == 's') return false;
    if (in_verb_lexicon(w.substr(0, w.size() - 1))) return true;
    if (w.size() > 3 && w.compare(w.size() - 3, 3, "ies") == 0 &&
        in_verb_lexicon(w.substr(0, w.size() - 3) + "y"))
      return true;
    return w.size() > 2 && w.compare(w.size() - 2, 2, "es") == 0 &&
           in_verb_lexicon(w.substr(0, w.size() - 2));
  }

  // "dropped" -> drop, "priced" -> price, "rallied" -> rally.
  bool regular_past(const std::string& w) const {
    if (w.size() < 4 || w.compare(w.size() - 2, 2, "ed") != 0) return false;
    std::string stem = w.substr(0, w.size() - 2);
    if (in_verb_lexicon(stem) || in_verb_lexicon(stem + "e")) return true;
    if (w.size() > 4 && w.compare(w.size() - 3, 3, "ied") == 0 &&
        in_verb_lexicon(w.substr(0, w.size() - 3) + "y"))
      return true;
    // doubled final consonant: dropped -> drop
    return stem.size() > 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
           in_verb_lexicon(stem.substr(0, stem.size() - 1));
  }

  bool participle(const std::string& w) const {
    return lx.irregular_participle_.count(w) > 0 || regular_past(w);
  }

  bool verbish(const std::string& w) const {
    return be_tense(w).has_value() || nonfinite_be(w) || have_tense(w).has_value() ||
           do_tense(w).has_value() || gerund(w) || participle(w) ||
           lx.irregular_past_.count(w) > 0 || in_verb_lexicon(w);
  }

  bool is_asset_tag(const Token& t) const {
    return t.kind == TagKind::Ticker || t.kind == TagKind::Other;
  }

  // Extends a started group rightward: absorbs adverbs/negation, verb-ish
  // continuations, "to" + verb, and (once) an asset tag straight after the
  // opening auxiliary — the inverted-question pattern "Will TICKER beat".
  uint32_t absorb_chain(uint32_t from, uint32_t limit, bool allow_inversion) const {
    uint32_t k = from;
    bool tag_skipped = false;
    while (k < limit) {
      const Token& t = doc.tokens[k];
      if (t.kind != TagKind::None) {
        if (allow_inversion && !tag_skipped && is_asset_tag(t) && k + 1 < limit) {
          std::string nxt = low(doc.tokens[k + 1]);
          if (verbish(nxt) || negation_or_adverb(nxt)) {
            tag_skipped = true;
            ++k;
            continue;
          }
        }
        break;
      }
      if (!is_word(t)) break;
      std::string w = low(t);
      if (negation_or_adverb(w)) {
        ++k;
        continue;
      }
      if (w == "to" && k + 1 < limit && is_word(doc.tokens[k + 1]) &&
          verbish(low(doc.tokens[k + 1]))) {
        k += 2;
        continue;
      }
      if (verbish(w)) {
        ++k;
        continue;
      }
      break;
    }
    return k;
  }

  // Tries to read one verb group starting at token k within [k, limit).
  // prev is the previous significant token index (or -1), used for guards.
  std::optional<VerbGroup> start(uint32_t k, uint32_t limit, int64_t prev,
                                 bool prev_in_group) const {
    const Token& t = doc.tokens[k];
    if (t.kind != TagKind::None || !is_word(t)) return std::nullopt;
    std::string w = low(t);

    std::string prev_w;
    if (prev >= 0 && is_word(doc.tokens[static_cast<size_t>(prev)]))
      prev_w = low(doc.tokens[static_cast<size_t>(prev)]);

    VerbGroup g;
    g.begin = k;
    g.head = k;

    if (future_modal(w)) {
      g.tense = Tense::Future;
      g.end = absorb_chain(k + 1, limit, true);
      return g;
    }

    if (auto bt = be_tense(w)) {
      // look ahead through adverbs for "going to" -> Future
      uint32_t j = k + 1;
      while (j < limit && is_word(doc.tokens[j]) && negation_or_adverb(low(doc.tokens[j]))) ++j;
      bool going_to = false;
      if (j + 1 < limit && is_word(doc.tokens[j]) && low(doc.tokens[j]) == "going" &&
          is_word(doc.tokens[j + 1]) && low(doc.tokens[j + 1]) == "to")
        going_to = true;
      g.tense = going_to ? Tense::Future : *bt;
      g.end = absorb_chain(k + 1, limit, true);
      return g;
    }

    if (auto ht = have_tense(w)) {
      g.tense = *ht;
      g.end = absorb_chain(k + 1, limit, true);
      return g;
    }

    if (auto dt = do_tense(w)) {
      g.tense = *dt;
      g.end = absorb_chain(k + 1, limit, true);
      return g;
    }

    if (other_modal(w)) {
      g.tense = Tense::Present;
      g.end = absorb_chain(k + 1, limit, true);
      return g;
    }

    bool prev_blocks = determiner_or_possessive(prev_w) || preposition(prev_w);

    if (lx.irregular_past_.count(w) && !prev_blocks) {
      g.tense = Tense::Past;
      g.end = absorb_chain(k + 1, limit, false);
      return g;
    }

    if (regular_past(w) && !prev_blocks) {
      g.tense = Tense::Past;
      g.end = absorb_chain(k + 1, limit, false);
      return g;
    }

    // finite present: 3rd person -s or a bare lexicon base (not after "to",
    // not straight after another group — "posted gains" is a noun)
    if (!prev_blocks && prev_w != "to" && !prev_in_group &&
        (third_person(w) || in_verb_lexicon(w))) {
      g.tense = Tense::Present;
      g.end = absorb_chain(k + 1, limit, false);
      return g;
    }

    return std::nullopt;
  }

  // All verb groups inside one sentence span.
  std::vector<VerbGroup> scan(uint32_t sb, uint32_t se) const {
    std::vector<VerbGroup> out;
    int64_t prev = -1;
    bool prev_in_group = false;
    for (uint32_t k = sb; k < se;) {
      const Token& t = doc.tokens[k];
      if (is_punct(t)) {
        prev = k;
        prev_in_group = false;
        ++k;
        continue;
      }
      if (auto g = start(k, se, prev, prev_in_group)) {
        out.push_back(*g);
        prev = static_cast<int64_t>(g->end) - 1;
        prev_in_group = true;
        k = g->end;
        continue;
      }
      prev = k;
      prev_in_group = false;
      ++k;
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Segmentation

namespace {

bool closing_mark(const Token& t) {
  return is_punct(t) &&
         (t.text == "\"" || t.text == "'" || t.text == ")" || t.text == "]" ||
          t.text == "”" || t.text == "’" || t.text == "»");
}

bool opener(const Token& t) {
  if (t.kind != TagKind::None) return true;  // tags can open sentences
  if (is_numeral(t)) return true;
  if (is_word(t)) return is_capitalized(t);
  return t.text == "\"" || t.text == "'" || t.text == "(" || t.text == "[" ||
         t.text == "“" || t.text == "‘" || t.text == "«";
}

}  // namespace

void Lingua::segment(TaggedDocument& doc) const {
  doc.sentences.clear();
  doc.clauses.clear();
  const auto& toks = doc.tokens;
  const uint32_t n = static_cast<uint32_t>(toks.size());

  // Sentence pass.
  uint32_t start = 0;
  for (uint32_t k = 0; k < n; ++k) {
    if (!is_sentence_end(toks[k])) continue;
    uint32_t j = k + 1;
    while (j < n && (is_sentence_end(toks[j]) || closing_mark(toks[j]))) ++j;
    if (j < n && !opener(toks[j])) continue;  // quote continuation etc.
    doc.sentences.emplace_back(start, j);
    start = j;
    k = j == 0 ? 0 : j - 1;
  }
  if (start < n) doc.sentences.emplace_back(start, n);

  // Clause pass: split where both sides carry a verb group.
  GroupScanner scanner{*this, doc};
  for (const Span& s : doc.sentences) {
    std::vector<VerbGroup> groups = scanner.scan(s.first, s.second);
    auto side_has_group = [&](uint32_t b, uint32_t e) {
      for (const auto& g : groups) {
        if (g.begin >= b && g.begin < e) return true;
      }
      return false;
    };
    auto inside_group = [&](uint32_t k) {
      for (const auto& g : groups) {
        if (k >= g.begin && k < g.end) return true;
      }
      return false;
    };

    uint32_t cb = s.first;
    for (uint32_t k = s.first; k < s.second; ++k) {
      const Token& t = toks[k];
      bool comma = clause_comma(t);
      bool conj = is_word(t) && !inside_group(k) && conjunction_marker(low(t));
      if (!comma && !conj) continue;
      uint32_t left_end = comma ? k + 1 : k;   // comma attaches left
      uint32_t right_begin = comma ? k + 1 : k;  // conjunction opens the right clause
      if (left_end <= cb) continue;
      if (!side_has_group(cb, k) || !side_has_group(right_begin, s.second)) continue;
      doc.clauses.emplace_back(cb, left_end);
      cb = right_begin;
    }
    if (cb < s.second) doc.clauses.emplace_back(cb, s.second);
  }
}

std::vector<VerbGroup> Lingua::tag_verbs(const TaggedDocument& doc) const {
  if (doc.sentences.empty() && !doc.tokens.empty())
    throw Error("tag_verbs needs a segmented document");
  GroupScanner scanner{*this, doc};
  std::vector<VerbGroup> out;
  for (uint32_t si = 0; si < doc.sentences.size(); ++si) {
    const Span& s = doc.sentences[si];
    for (VerbGroup g : scanner.scan(s.first, s.second)) {
      g.sentence = si;
      for (uint32_t ci = 0; ci < doc.clauses.size(); ++ci) {
        if (g.begin >= doc.clauses[ci].first && g.begin < doc.clauses[ci].second) {
          g.clause = ci;
          break;
        }
      }
      out.push_back(g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linking

namespace {

bool asset_mention(const Token& t) {
  return t.kind == TagKind::Ticker || t.kind == TagKind::Other;
}

int clause_of(const TaggedDocument& doc, uint32_t tok) {
  for (uint32_t ci = 0; ci < doc.clauses.size(); ++ci) {
    if (tok >= doc.clauses[ci].first && tok < doc.clauses[ci].second)
      return static_cast<int>(ci);
  }
  return -1;
}

}  // namespace

std::vector<TenseLink> Lingua::link_dependency(const TaggedDocument& doc,
                                               const std::vector<VerbGroup>& groups) const {
  std::vector<TenseLink> out;
  for (uint32_t i = 0; i < doc.tokens.size(); ++i) {
    if (!asset_mention(doc.tokens[i])) continue;
    int ci = clause_of(doc, i);
    if (ci < 0) continue;

    int containing = -1, following = -1, preceding = -1;
    for (uint32_t gi = 0; gi < groups.size(); ++gi) {
      const VerbGroup& g = groups[gi];
      if (static_cast<int>(g.clause) != ci) continue;
      if (i >= g.begin && i < g.end) containing = static_cast<int>(gi);
      if (g.begin > i && following < 0) following = static_cast<int>(gi);
      if (g.end <= i) preceding = static_cast<int>(gi);
    }

    if (containing >= 0) {
      out.push_back({i, static_cast<uint32_t>(containing), Role::Subject});
      continue;
    }

    if (following >= 0) {
      // Intervening plain nouns break the subject relation unless they sit
      // directly against the mention (its own modifiers: "TICKER stock is").
      const VerbGroup& f = groups[static_cast<size_t>(following)];
      bool blocked = false;
      uint32_t k = i + 1;
      while (k < f.begin && is_word(doc.tokens[k]) && doc.tokens[k].kind == TagKind::None &&
             !negation_or_adverb(low(doc.tokens[k])))
        ++k;  // modifier run attached to the mention
      for (; k < f.begin; ++k) {
        const Token& t = doc.tokens[k];
        if (t.kind != TagKind::None) {
          blocked = true;  // another tagged mention competes for the verb
          break;
        }
        if (is_word(t) && !negation_or_adverb(low(t)) && !determiner_or_possessive(low(t))) {
          blocked = true;
          break;
        }
      }
      if (!blocked) {
        out.push_back({i, static_cast<uint32_t>(following), Role::Subject});
        continue;
      }
    }

    if (preceding >= 0)
      out.push_back({i, static_cast<uint32_t>(preceding), Role::Object});
  }
  return out;
}

std::vector<TenseLink> Lingua::link_proximity(const TaggedDocument& doc,
                                              const std::vector<VerbGroup>& groups) const {
  std::vector<TenseLink> out;
  for (uint32_t i = 0; i < doc.tokens.size(); ++i) {
    if (!asset_mention(doc.tokens[i])) continue;
    int ci = clause_of(doc, i);
    if (ci < 0) continue;

    int containing = -1, following = -1, preceding = -1;
    for (uint32_t gi = 0; gi < groups.size(); ++gi) {
      const VerbGroup& g = groups[gi];
      if (static_cast<int>(g.clause) != ci) continue;
      if (i >= g.begin && i < g.end) containing = static_cast<int>(gi);
      if (g.begin > i && following < 0) following = static_cast<int>(gi);
      if (g.end <= i) preceding = static_cast<int>(gi);
    }

    if (containing >= 0) {
      out.push_back({i, static_cast<uint32_t>(containing), Role::Subject});
      continue;
    }

    auto words_between = [&](uint32_t b, uint32_t e) {
      int c = 0;
      for (uint32_t k = b; k < e; ++k) {
        if (!is_punct(doc.tokens[k])) ++c;
      }
      return c;
    };

    int dp = preceding >= 0
                 ? words_between(groups[static_cast<size_t>(preceding)].end, i)
                 : -1;
    int df = following >= 0
                 ? words_between(i + 1, groups[static_cast<size_t>(following)].begin)
                 : -1;

    if (dp < 0 && df < 0) continue;
    bool pick_preceding = df < 0 || (dp >= 0 && dp <= df);
    if (pick_preceding)
      out.push_back({i, static_cast<uint32_t>(preceding), Role::Object});
    else
      out.push_back({i, static_cast<uint32_t>(following), Role::Subject});
  }
  return out;
}

LinguaAnalysis Lingua::analyze(TaggedDocument& doc) const {
  segment(doc);
  LinguaAnalysis a;
  a.groups = tag_verbs(doc);
  a.dependency = link_dependency(doc, a.groups);
  a.proximity = link_proximity(doc, a.groups);
  return a;
}

}  // namespace newstense
