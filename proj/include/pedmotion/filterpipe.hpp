#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pedmotion/motion.hpp"
#include "pedmotion/trajectory.hpp"

namespace pedmotion {

/// Porter step 1a/1b/5a stemming: strips plural -s/-es, -ed and -ing and
/// normalizes the stem ("running" -> "run", "stumbled" -> "stumbl").
std::string stem(std::string_view word);

/// Lowercases, splits on anything that is not a letter or digit and stems.
std::vector<std::string> tokenize(std::string_view text);

struct TagCategory {
  std::string tag;
  std::vector<std::string> stems;
};

struct FilterConfig {
  std::vector<std::string> keywords;
  /// Category order also fixes the primary tag priority.
  std::vector<TagCategory> categories;

  static FilterConfig defaults();
  void validate() const;
};

struct FilterDecision {
  std::string id;
  bool accepted = false;
  std::vector<std::string> matched;  // keyword stems in keyword-list order
};

struct FilterResult {
  std::vector<MotionSequence> accepted;
  std::vector<FilterDecision> report;  // one entry per input, in input order
};

/// Matches annotations against `keywords` (stemmed with the same stemmer).
/// Throws InvalidInput if `keywords` is empty.
std::vector<FilterDecision> keyword_match(std::span<const MotionSequence> corpus,
                                          std::span<const std::string> keywords);
FilterResult keyword_filter(std::span<const MotionSequence> corpus, std::span<const std::string> keywords);

inline const std::string kOtherTag = "other";

struct TagSet {
  std::vector<std::string> tags;     // category order; {"other"} when nothing matched
  std::vector<std::string> matched;  // matched stems

  /// First tag in category order.
  const std::string& primary() const { return tags.front(); }
};

TagSet tag_behavior(std::string_view annotation, const FilterConfig& config = FilterConfig::defaults());

struct TagDistribution {
  std::vector<std::string> tags;  // category tags followed by "other"
  /// Per behavior class: multi-label tag counts (a motion counts once per tag).
  std::map<BehaviorClass, std::map<std::string, std::size_t>> tag_counts;
  /// Per behavior class: one count per motion under its primary tag.
  std::map<BehaviorClass, std::map<std::string, std::size_t>> primary_counts;
  std::size_t total = 0;
};

TagDistribution tag_distribution(std::span<const std::pair<TagSet, BehaviorClass>> tagged,
                                 const FilterConfig& config = FilterConfig::defaults());

}  // namespace pedmotion
