#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "newstense/lexicon.hpp"
#include "newstense/text.hpp"

namespace newstense {

enum class Tense : uint8_t { Present = 0, Past = 1, Future = 2 };
std::string_view tense_name(Tense t);

enum class Role : uint8_t { Subject = 0, Object = 1 };

// A contiguous run of tokens acting as one verb complex ("is going to have
// to fix", "will take", "dropped"), with the tense decided by its head.
struct VerbGroup {
  uint32_t begin = 0;  // token index span [begin, end)
  uint32_t end = 0;
  uint32_t head = 0;      // leftmost finite token
  Tense tense = Tense::Present;
  uint32_t sentence = 0;  // indices into doc.sentences / doc.clauses
  uint32_t clause = 0;
};

// One asset-mention-to-verb-group link.
struct TenseLink {
  uint32_t token = 0;  // TICKER/OTHER (or resolved referential) token index
  uint32_t group = 0;  // index into the VerbGroup vector
  Role role = Role::Subject;
};

struct LinguaAnalysis {
  std::vector<VerbGroup> groups;
  std::vector<TenseLink> dependency;
  std::vector<TenseLink> proximity;
};

// Rule-based tense analysis backed by a verb lexicon. Stateless once built.
class Lingua {
 public:
  // Loads verbs.txt (base forms) and irregular_verbs.tsv
  // (base<TAB>past<TAB>participle) from dir.
  explicit Lingua(const std::filesystem::path& data_dir);
  Lingua(WordSet verb_bases, const std::vector<std::array<std::string, 3>>& irregulars);

  // Fills doc.sentences and doc.clauses. Sentences end at ./!/? followed by
  // a plausible sentence opener; clauses split at commas, semicolons and
  // coordinating conjunctions when both sides hold a verb group.
  void segment(TaggedDocument& doc) const;

  // Detects verb groups with tenses. Requires a segmented document.
  std::vector<VerbGroup> tag_verbs(const TaggedDocument& doc) const;

  // Dependency-style linking: an asset mention inside a group span is its
  // Subject (inversion); otherwise the first following group in the clause
  // with no intervening noun-ish token run (other than the mention's own
  // modifiers) takes it as Subject; otherwise the last preceding group in
  // the clause takes it as Object.
  std::vector<TenseLink> link_dependency(const TaggedDocument& doc,
                                         const std::vector<VerbGroup>& groups) const;

  // Proximity linking: nearest group in the clause by count of intervening
  // non-punctuation tokens, ties to the preceding group. Mentions before
  // the verb are Subjects, after it Objects.
  std::vector<TenseLink> link_proximity(const TaggedDocument& doc,
                                        const std::vector<VerbGroup>& groups) const;

  // segment + tag_verbs + both linkers in one call.
  LinguaAnalysis analyze(TaggedDocument& doc) const;

  const WordSet& verb_bases() const { return verb_bases_; }

 private:
  WordSet verb_bases_;
  WordSet irregular_past_;
  WordSet irregular_participle_;

  friend struct GroupScanner;
};

}  // namespace newstense
