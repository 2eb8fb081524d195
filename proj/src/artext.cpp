#include "arsparql/artext.hpp"

#include <algorithm>
#include <cctype>

#include "arsparql/error.hpp"

namespace arsparql {

namespace utf8 {

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    auto c = static_cast<unsigned char>(s[i]);
    char32_t cp;
    std::size_t n;
    if (c < 0x80) {
      cp = c;
      n = 1;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1F;
      n = 2;
    } else if ((c >> 4) == 0xE) {
      cp = c & 0x0F;
      n = 3;
    } else if ((c >> 3) == 0x1E) {
      cp = c & 0x07;
      n = 4;
    } else {
      // Invalid lead byte: pass it through as U+FFFD.
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + n > s.size()) {
      out.push_back(0xFFFD);
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k < n; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += n;
  }
  return out;
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }
  return out;
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

}  // namespace utf8

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::string join(const std::vector<std::string> &words, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += sep;
    out += words[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization

NormalizationTable::NormalizationTable(std::vector<std::pair<char32_t, char32_t>> rules,
                                       std::unordered_set<char32_t> strip)
    : rules_(std::move(rules)), strip_(std::move(strip)) {}

const NormalizationTable &NormalizationTable::arabic_default() {
  static const NormalizationTable table(
      {
          {U'\u0625', U'\u0627'},  // إ
          {U'\u0623', U'\u0627'},  // أ
          {U'\u0622', U'\u0627'},  // آ
          {U'\u0671', U'\u0627'},  // ٱ
          {U'\u0629', U'\u0647'},  // ة -> ه
          {U'\u0649', U'\u064A'},  // ى -> ي
      },
      {
          U'\u064B', U'\u064C', U'\u064D', U'\u064E', U'\u064F', U'\u0650',  // harakat
          U'\u0651', U'\u0652', U'\u0670', U'\u0640', U'_',                  // shadda .. tatweel
      });
  return table;
}

std::string NormalizationTable::apply(std::string_view word) const {
  std::u32string in = utf8::decode(word);
  std::u32string out;
  out.reserve(in.size());
  for (char32_t c : in) {
    if (strip_.count(c)) continue;
    for (const auto &[from, to] : rules_) {
      if (c == from) {
        c = to;
        break;
      }
    }
    out.push_back(c);
  }
  return utf8::encode(out);
}

// ---------------------------------------------------------------------------
// Stop words

StopWordList::StopWordList(const std::vector<std::string> &words) {
  for (const auto &w : words) words_.insert(normalize(w));
}

StopWordList StopWordList::parse(std::string_view text) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    for (auto &w : split_whitespace(line)) words.push_back(std::move(w));
    start = end + 1;
  }
  return StopWordList(words);
}

const StopWordList &StopWordList::arabic_default() {
  // Relative pronouns, prepositions, question particles and negation words.
  static const StopWordList list({
      "الذي", "التي", "الذين", "اللذان", "اللتان", "اللاتي", "اللواتي",
      "في",   "من",   "على",   "إلى",   "عن",    "ب",     "بـ",
      "ل",    "لـ",   "ك",     "مع",    "عبر",   "هل",    "ما",
      "ماذا", "هو",   "هي",    "هم",    "لا",    "لم",    "لن",
      "غير",  "و",    "أو",    "ثم",    "كل",    "جميع",
  });
  return list;
}

bool StopWordList::contains(std::string_view w) const { return words_.count(std::string(w)) > 0; }

std::vector<std::string> StopWordList::strip(const std::vector<std::string> &tokens) const {
  std::vector<std::string> out;
  for (const auto &t : tokens)
    if (!contains(t)) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// Light stemming

namespace {

void sort_longest_first(std::vector<std::u32string> &v) {
  std::stable_sort(v.begin(), v.end(),
                   [](const auto &a, const auto &b) { return a.size() > b.size(); });
}

std::vector<std::u32string> decode_all(const std::vector<std::string> &v) {
  std::vector<std::u32string> out;
  for (const auto &s : v) out.push_back(utf8::decode(s));
  return out;
}

bool starts_with(const std::u32string &w, const std::u32string &p) {
  return w.size() >= p.size() && std::equal(p.begin(), p.end(), w.begin());
}
bool ends_with(const std::u32string &w, const std::u32string &s) {
  return w.size() >= s.size() && std::equal(s.rbegin(), s.rend(), w.rbegin());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

StemRules::StemRules(std::vector<std::string> prefixes, std::vector<std::string> suffixes,
                     std::size_t min_stem_length)
    : prefixes_(decode_all(prefixes)), suffixes_(decode_all(suffixes)), min_len_(min_stem_length) {
  sort_longest_first(prefixes_);
  sort_longest_first(suffixes_);
}

const StemRules &StemRules::light_default() {
  static const StemRules rules({"وال", "بال", "كال", "فال", "ال", "لل", "و"},
                               {"ها", "ان", "ات", "ون", "ين", "ية", "ه", "ة", "ي"}, 3);
  return rules;
}

StemRules StemRules::parse(std::string_view text) {
  const StemRules &def = light_default();
  std::vector<std::string> prefixes, suffixes;
  std::size_t min_len = def.min_len_;
  bool saw_prefix = false, saw_suffix = false;
  std::size_t start = 0;
  long line_no = 0;
  while (start <= text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw Error(ErrorCode::kConfigError, "stem rule line without ':'", line_no);
    std::string_view key = trim(line.substr(0, colon));
    std::string value(trim(line.substr(colon + 1)));
    if (key == "prefix") {
      saw_prefix = true;
      prefixes.push_back(value);
    } else if (key == "suffix") {
      saw_suffix = true;
      suffixes.push_back(value);
    } else if (key == "min") {
      try {
        min_len = static_cast<std::size_t>(std::stoul(value));
      } catch (const std::exception &) {
        throw Error(ErrorCode::kConfigError, "bad min stem length '" + value + "'", line_no);
      }
    } else {
      throw Error(ErrorCode::kConfigError, "unknown stem rule key '" + std::string(key) + "'",
                  line_no);
    }
  }
  StemRules out({}, {}, min_len);
  out.prefixes_ = saw_prefix ? decode_all(prefixes) : def.prefixes_;
  out.suffixes_ = saw_suffix ? decode_all(suffixes) : def.suffixes_;
  sort_longest_first(out.prefixes_);
  sort_longest_first(out.suffixes_);
  return out;
}

std::string StemRules::stem(std::string_view word) const {
  std::u32string w = utf8::decode(word);
  for (const auto &p : prefixes_) {
    if (starts_with(w, p) && w.size() - p.size() >= min_len_) {
      w.erase(0, p.size());
      break;
    }
  }
  for (const auto &s : suffixes_) {
    if (ends_with(w, s) && w.size() - s.size() >= min_len_) {
      w.erase(w.size() - s.size());
      break;
    }
  }
  return utf8::encode(w);
}

std::string skeleton(std::string_view word) {
  std::u32string w = utf8::decode(word);
  if (w.size() <= 2) return std::string(word);
  std::u32string out;
  out.push_back(w.front());
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    char32_t c = w[i];
    if (c == U'ا' || c == U'و' || c == U'ي') continue;
    out.push_back(c);
  }
  out.push_back(w.back());
  return utf8::encode(out);
}

bool is_comparative(std::string_view w) {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> s;
    for (const char *x : {"أكبر", "أصغر", "أكثر", "أقل", "أهم", "أبرز", "أعلى", "أدنى", "أطول",
                          "أقصر", "أشهر", "أفضل", "أسوأ", "أخطر", "أشد", "الأكبر", "الأصغر",
                          "الأكثر", "الأقل", "الأهم", "الأبرز", "الأعلى", "الأطول", "المشابه"})
      s.insert(normalize(x));
    return s;
  }();
  return words.count(std::string(w)) > 0;
}

std::vector<std::string> TextProcessor::normalize_all(const std::vector<std::string> &ws) const {
  std::vector<std::string> out;
  out.reserve(ws.size());
  for (const auto &w : ws) {
    std::string n = normalize(w);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

std::vector<std::string> TextProcessor::content_words(const std::vector<std::string> &ws) const {
  std::vector<std::string> norm = normalize_all(ws);
  std::vector<std::string> kept = stopwords.strip(norm);
  return kept.empty() ? norm : kept;
}

}  // namespace arsparql
