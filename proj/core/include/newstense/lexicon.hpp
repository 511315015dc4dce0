#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>

namespace newstense {

using WordSet = std::unordered_set<std::string>;

// Loads a one-entry-per-line word list. Lines are trimmed, lowercased and
// accent-folded; empty lines and lines starting with '#' are skipped.
WordSet load_word_list(const std::filesystem::path& file);

// Gazetteers used by entity and asset tagging.
struct LexiconSet {
  WordSet surnames;
  WordSet cities;
  WordSet abbreviations;
  WordSet assets;             // known asset names, lowercase
  WordSet referential_nouns;  // "company", "stock", ... singular forms

  // Reads surnames.txt, cities.txt, abbreviations.txt, assets.txt and
  // referential_nouns.txt from dir. Missing files raise Error.
  static LexiconSet load_dir(const std::filesystem::path& dir);
};

}  // namespace newstense
