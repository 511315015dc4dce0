#include "newstense/lexicon.hpp"

#include <fstream>

#include "newstense/error.hpp"
#include "newstense/text.hpp"

namespace newstense {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

WordSet load_word_list(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open word list: " + file.string());
  WordSet out;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = trim(line);
    if (w.empty() || w[0] == '#') continue;
    out.insert(lower_ascii(fold_accents(w)));
  }
  return out;
}

LexiconSet LexiconSet::load_dir(const std::filesystem::path& dir) {
  LexiconSet set;
  set.surnames = load_word_list(dir / "surnames.txt");
  set.cities = load_word_list(dir / "cities.txt");
  set.abbreviations = load_word_list(dir / "abbreviations.txt");
  set.assets = load_word_list(dir / "assets.txt");
  set.referential_nouns = load_word_list(dir / "referential_nouns.txt");
  return set;
}

}  // namespace newstense
