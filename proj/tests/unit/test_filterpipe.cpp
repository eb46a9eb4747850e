#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pedmotion/error.hpp"
#include "pedmotion/filterpipe.hpp"

using namespace pedmotion;

namespace {

std::vector<MotionSequence> load_fixture() {
  std::ifstream in(std::string(PEDMOTION_FIXTURE_DIR) + "/annotations_200.ndjson");
  REQUIRE(in.good());
  std::vector<MotionSequence> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    MotionSequence seq;
    seq.id = j.at("id").get<std::string>();
    seq.annotation = j.at("annotation").get<std::string>();
    out.push_back(std::move(seq));
  }
  return out;
}

std::size_t expected_accepted() {
  std::ifstream in(std::string(PEDMOTION_FIXTURE_DIR) + "/annotations_200.expected.json");
  return nlohmann::json::parse(in).at("accepted").get<std::size_t>();
}

std::vector<std::string> ids(const std::vector<MotionSequence>& seqs) {
  std::vector<std::string> out;
  for (const auto& s : seqs) out.push_back(s.id);
  return out;
}

}  // namespace

TEST_CASE("stemming") {
  CHECK(stem("running") == "run");
  CHECK(stem("walks") == "walk");
  CHECK(stem("walked") == "walk");
  CHECK(stem("crosses") == "cross");
  CHECK(stem("crossing") == "cross");
  CHECK(stem("jogging") == "jog");
  CHECK(stem("stumbled") == "stumbl");
  CHECK(stem("stumble") == "stumbl");
  CHECK(stem("striding") == "stride");
  CHECK(stem("stride") == "stride");
  CHECK(stem("falls") == "fall");
  CHECK(stem("strolling") == "stroll");
  CHECK(stem("stepped") == "step");
  CHECK(stem("ran") == "ran");
  CHECK(stem("caresses") == "caress");
  CHECK(stem("ponies") == "poni");
  CHECK(stem("agreed") == "agre");
  CHECK(stem("hoping") == "hope");
}

TEST_CASE("tokenizer lowercases and splits on punctuation") {
  const auto t = tokenize("A man, WALKING-across the street!");
  CHECK(t == std::vector<std::string>{"a", "man", "walk", "across", "the", "street"});
  CHECK(tokenize("").empty());
}

TEST_CASE("golden accepted count on the fixture corpus") {
  const auto corpus = load_fixture();
  REQUIRE(corpus.size() == 200);
  const FilterConfig config = FilterConfig::defaults();
  const FilterResult r = keyword_filter(corpus, config.keywords);
  CHECK(r.accepted.size() == expected_accepted());
  CHECK(r.report.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(r.report[i].id == corpus[i].id);
    CHECK(r.report[i].accepted == !r.report[i].matched.empty());
  }
}

TEST_CASE("filtering is idempotent") {
  const auto corpus = load_fixture();
  const auto keywords = FilterConfig::defaults().keywords;
  const FilterResult once = keyword_filter(corpus, keywords);
  const FilterResult twice = keyword_filter(once.accepted, keywords);
  CHECK(ids(once.accepted) == ids(twice.accepted));
}

TEST_CASE("adding keywords never removes accepted items") {
  const auto corpus = load_fixture();
  const auto all = FilterConfig::defaults().keywords;
  std::vector<std::string> prefix;
  std::vector<std::string> previous;
  for (const std::string& k : all) {
    prefix.push_back(k);
    const auto now = ids(keyword_filter(corpus, prefix).accepted);
    CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()) == true);
    CHECK(now.size() >= previous.size());
    previous = now;
  }
}

TEST_CASE("empty keyword list is rejected") {
  const auto corpus = load_fixture();
  CHECK_THROWS_AS(keyword_filter(corpus, {}), Error);
}

TEST_CASE("tags follow category order") {
  const FilterConfig config = FilterConfig::defaults();
  const TagSet a = tag_behavior("a person stumbles while running", config);
  CHECK(a.tags == std::vector<std::string>{"running", "falling"});
  CHECK(a.primary() == "running");
  const TagSet b = tag_behavior("someone dances", config);
  CHECK(b.tags == std::vector<std::string>{std::string(kOtherTag)});
}

TEST_CASE("tag distribution counts") {
  const FilterConfig config = FilterConfig::defaults();
  std::vector<std::pair<TagSet, BehaviorClass>> tagged = {
      {tag_behavior("walks and waits", config), BehaviorClass::Crossing},
      {tag_behavior("runs", config), BehaviorClass::Crossing},
      {tag_behavior("waves", config), BehaviorClass::NotCrossing},
  };
  const TagDistribution d = tag_distribution(tagged, config);
  CHECK(d.total == 3);
  CHECK(d.tag_counts.at(BehaviorClass::Crossing).at("walking") == 1);
  CHECK(d.tag_counts.at(BehaviorClass::Crossing).at("standing") == 1);
  CHECK(d.primary_counts.at(BehaviorClass::Crossing).at("standing") == 0);
  CHECK(d.primary_counts.at(BehaviorClass::NotCrossing).at("other") == 1);
  std::size_t primary_sum = 0;
  for (const auto& [cls, counts] : d.primary_counts) {
    for (const auto& [tag, n] : counts) primary_sum += n;
  }
  CHECK(primary_sum == d.total);
}

TEST_CASE("filter config validation") {
  FilterConfig c = FilterConfig::defaults();
  CHECK_NOTHROW(c.validate());
  c.categories.push_back(c.categories.front());
  CHECK_THROWS_AS(c.validate(), Error);
  c = FilterConfig::defaults();
  c.keywords.clear();
  CHECK_THROWS_AS(c.validate(), Error);
}
