#include "pedmotion/filterpipe.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

namespace {

// Porter stemmer helpers over a lowercase ASCII word.
bool is_consonant(const std::string& w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return false;
    case 'y': return i == 0 || !is_consonant(w, i - 1);
    default: return true;
  }
}

// Number of VC sequences in w[0, len).
int measure(const std::string& w, std::size_t len) {
  int m = 0;
  std::size_t i = 0;
  while (i < len && is_consonant(w, i)) ++i;
  while (i < len) {
    while (i < len && !is_consonant(w, i)) ++i;
    if (i >= len) break;
    while (i < len && is_consonant(w, i)) ++i;
    ++m;
  }
  return m;
}

bool has_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_double_consonant(const std::string& w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// consonant-vowel-consonant ending, last consonant not w, x or y.
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1)) return false;
  const char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() && std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string& w) {
  bool trimmed = false;
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.pop_back();
    return;
  }
  if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
    w.resize(w.size() - 2);
    trimmed = true;
  } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
    w.resize(w.size() - 3);
    trimmed = true;
  }
  if (!trimmed) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w += 'e';
  } else if (ends_double_consonant(w) && w.back() != 'l' && w.back() != 's' && w.back() != 'z') {
    w.pop_back();
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w += 'e';
  }
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  const std::size_t len = w.size() - 1;
  const int m = measure(w, len);
  if (m > 1 || (m == 1 && !ends_cvc(w, len))) w.pop_back();
}

std::set<std::string> stem_set(std::span<const std::string> words) {
  std::set<std::string> out;
  for (const std::string& w : words) {
    for (std::string& t : tokenize(w)) out.insert(std::move(t));
  }
  return out;
}

}  // namespace

std::string stem(std::string_view word) {
  std::string w(word);
  if (w.size() <= 2) return w;
  step1a(w);
  step1b(w);
  step5a(w);
  return w;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&]() {
    if (!current.empty()) tokens.push_back(stem(current));
    current.clear();
  };
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current += c < 0x80 ? static_cast<char>(std::tolower(c)) : ch;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

FilterConfig FilterConfig::defaults() {
  FilterConfig c;
  c.keywords = {"walk", "run", "jog", "cross", "step", "stroll", "stride", "stand", "wait", "fall", "stumble"};
  c.categories = {
      {"walking", {"walk", "stroll", "stride", "step", "cross", "wander", "pace", "march"}},
      {"running", {"run", "jog", "sprint", "dash", "hurry"}},
      {"standing", {"stand", "wait", "idle", "pause", "stop"}},
      {"falling", {"fall", "stumble", "trip", "slip", "collapse"}},
  };
  return c;
}

void FilterConfig::validate() const {
  if (keywords.empty()) fail(ErrorCode::Validation, "filter config: keyword list is empty");
  std::set<std::string> tags;
  for (const TagCategory& c : categories) {
    if (c.tag.empty() || c.tag == kOtherTag) {
      fail(ErrorCode::Validation, fmt::format("filter config: invalid tag name '{}'", c.tag));
    }
    if (!tags.insert(c.tag).second) fail(ErrorCode::Validation, fmt::format("filter config: duplicate tag '{}'", c.tag));
    if (c.stems.empty()) fail(ErrorCode::Validation, fmt::format("filter config: tag '{}' has no stems", c.tag));
  }
}

std::vector<FilterDecision> keyword_match(std::span<const MotionSequence> corpus, std::span<const std::string> keywords) {
  if (keywords.empty()) fail(ErrorCode::InvalidInput, "keyword list is empty");
  std::vector<std::string> stems;
  for (const std::string& k : keywords) {
    for (std::string& s : tokenize(k)) {
      if (std::find(stems.begin(), stems.end(), s) == stems.end()) stems.push_back(std::move(s));
    }
  }
  std::vector<FilterDecision> out;
  out.reserve(corpus.size());
  for (const MotionSequence& seq : corpus) {
    const auto tokens = tokenize(seq.annotation);
    const std::set<std::string> present(tokens.begin(), tokens.end());
    FilterDecision d;
    d.id = seq.id;
    for (const std::string& s : stems) {
      if (present.count(s)) d.matched.push_back(s);
    }
    d.accepted = !d.matched.empty();
    out.push_back(std::move(d));
  }
  return out;
}

FilterResult keyword_filter(std::span<const MotionSequence> corpus, std::span<const std::string> keywords) {
  FilterResult result;
  result.report = keyword_match(corpus, keywords);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (result.report[i].accepted) result.accepted.push_back(corpus[i]);
  }
  return result;
}

TagSet tag_behavior(std::string_view annotation, const FilterConfig& config) {
  const auto tokens = tokenize(annotation);
  const std::set<std::string> present(tokens.begin(), tokens.end());
  TagSet out;
  for (const TagCategory& cat : config.categories) {
    bool hit = false;
    for (const std::string& s : stem_set(cat.stems)) {
      if (present.count(s)) {
        hit = true;
        if (std::find(out.matched.begin(), out.matched.end(), s) == out.matched.end()) out.matched.push_back(s);
      }
    }
    if (hit) out.tags.push_back(cat.tag);
  }
  if (out.tags.empty()) out.tags.push_back(kOtherTag);
  return out;
}

TagDistribution tag_distribution(std::span<const std::pair<TagSet, BehaviorClass>> tagged,
                                 const FilterConfig& config) {
  TagDistribution dist;
  for (const TagCategory& c : config.categories) dist.tags.push_back(c.tag);
  dist.tags.push_back(kOtherTag);
  for (BehaviorClass cls : kBehaviorClasses) {
    for (const std::string& tag : dist.tags) {
      dist.tag_counts[cls][tag] = 0;
      dist.primary_counts[cls][tag] = 0;
    }
  }
  for (const auto& [tags, cls] : tagged) {
    if (tags.tags.empty()) fail(ErrorCode::InvalidInput, "tag set is empty");
    for (const std::string& tag : tags.tags) {
      if (!dist.tag_counts[cls].count(tag)) fail(ErrorCode::InvalidInput, fmt::format("unknown tag '{}'", tag));
      ++dist.tag_counts[cls][tag];
    }
    ++dist.primary_counts[cls][tags.primary()];
    ++dist.total;
  }
  return dist;
}

}  // namespace pedmotion
