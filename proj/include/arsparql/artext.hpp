#pragma once

// Arabic text processing: orthographic normalization, stop-word removal,
// light stemming and the weak-letter skeleton used as the loosest match tier.
// All tables are immutable after construction.

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace arsparql {

namespace utf8 {
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
std::size_t length(std::string_view s);  // code points
}  // namespace utf8

std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string> &words, std::string_view sep = " ");

class NormalizationTable {
 public:
  // إ أ آ ٱ -> ا, ة -> ه, ى -> ي; strips harakat, superscript alef, tatweel and "_".
  static const NormalizationTable &arabic_default();

  NormalizationTable(std::vector<std::pair<char32_t, char32_t>> rules,
                     std::unordered_set<char32_t> strip);

  std::string apply(std::string_view word) const;

 private:
  std::vector<std::pair<char32_t, char32_t>> rules_;
  std::unordered_set<char32_t> strip_;
};

inline std::string normalize(std::string_view word) {
  return NormalizationTable::arabic_default().apply(word);
}

class StopWordList {
 public:
  StopWordList() = default;
  explicit StopWordList(const std::vector<std::string> &words);

  // One word per line, '#' starts a comment. Entries are normalized on load.
  static StopWordList parse(std::string_view text);
  static const StopWordList &arabic_default();

  bool contains(std::string_view normalized_word) const;
  std::vector<std::string> strip(const std::vector<std::string> &tokens) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

class StemRules {
 public:
  static const StemRules &light_default();

  StemRules(std::vector<std::string> prefixes, std::vector<std::string> suffixes,
            std::size_t min_stem_length = 3);

  // Lines "prefix:وال", "suffix:ها", "min:3"; '#' comments. Sections that are
  // present replace the corresponding defaults.
  static StemRules parse(std::string_view text);

  // Strips the longest applicable prefix once, then the longest applicable
  // suffix once; a strip applies only when at least min_stem_length code
  // points remain.
  std::string stem(std::string_view word) const;

  const std::vector<std::u32string> &prefixes() const { return prefixes_; }
  const std::vector<std::u32string> &suffixes() const { return suffixes_; }
  std::size_t min_stem_length() const { return min_len_; }

 private:
  std::vector<std::u32string> prefixes_;
  std::vector<std::u32string> suffixes_;
  std::size_t min_len_;
};

inline std::string light_stem(std::string_view word) {
  return StemRules::light_default().stem(word);
}

// Drops interior ا/و/ي, keeping the first and last code point.
std::string skeleton(std::string_view word);

// Comparative / superlative forms (أكبر, أهم, ...), normalized.
bool is_comparative(std::string_view normalized_word);

// Bundles the configured tables so the pipeline can pass one object around.
struct TextProcessor {
  const NormalizationTable *table = &NormalizationTable::arabic_default();
  StopWordList stopwords = StopWordList::arabic_default();
  StemRules stems = StemRules::light_default();

  std::string normalize(std::string_view w) const { return table->apply(w); }
  std::vector<std::string> normalize_all(const std::vector<std::string> &ws) const;
  // normalize -> stop-words; falls back to the normalized words when every
  // word is a stop-word.
  std::vector<std::string> content_words(const std::vector<std::string> &ws) const;
  std::string stem(std::string_view w) const { return stems.stem(w); }
  std::string skeleton(std::string_view w) const { return arsparql::skeleton(w); }
};

}  // namespace arsparql
