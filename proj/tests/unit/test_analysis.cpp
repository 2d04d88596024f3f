// Copyright 2026 The heurex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <chrono>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "heurex/analysis.hpp"
#include "heurex/error.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace heurex;
using namespace heurex::analysis;

namespace {

template <typename F>
Error capture(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error thrown");
  return Error(ErrorCode::InvalidArgument, "unreachable");
}

std::vector<std::string> words_of(const WordCounts& counts) {
  std::vector<std::string> out;
  for (const auto& [w, n] : counts) out.push_back(w);
  return out;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("precision, recall and F1") {
    const auto m = precision_recall_f1(63, 38, 100);
    CHECK(*m.precision == doctest::Approx(38.0 / 63).epsilon(1e-12));
    CHECK(round_half_even(*m.precision) == 0.603);
    CHECK(round_half_even(*m.recall) == 0.380);
    CHECK(round_half_even(*m.f1) == 0.466);

    const auto perfect = precision_recall_f1(10, 10, 10);
    CHECK(*perfect.precision == 1.0);
    CHECK(*perfect.recall == 1.0);
    CHECK(*perfect.f1 == 1.0);

    const auto zero = precision_recall_f1(5, 0, 10);
    CHECK(*zero.precision == 0.0);
    CHECK(*zero.recall == 0.0);
    CHECK_FALSE(zero.f1.has_value());

    const auto nothing = precision_recall_f1(0, 0, 0);
    CHECK_FALSE(nothing.precision.has_value());
    CHECK_FALSE(nothing.recall.has_value());

    for (auto [r, h, g] : {std::tuple{-1L, 0L, 1L}, std::tuple{3L, 4L, 10L}, std::tuple{10L, 4L, 3L},
                           std::tuple{1L, -1L, 1L}}) {
      CHECK(capture([&] { precision_recall_f1(r, h, g); }).code() == ErrorCode::InvalidCounts);
    }

    const auto j = nlohmann::json::parse(metrics_to_json(m));
    CHECK(j["precision"] == 0.603);
    CHECK(nlohmann::json::parse(metrics_to_json(zero))["f1"].is_null());
  }

  TEST_CASE("metrics do not depend on scale") {
    std::mt19937 rng(9);
    for (int i = 0; i < 500; ++i) {
      const long g = static_cast<long>(rng() % 50) + 1;
      const long r = static_cast<long>(rng() % 50) + 1;
      const long h = static_cast<long>(rng() % (std::min(r, g) + 1));
      const long k = static_cast<long>(rng() % 9) + 2;
      const auto a = precision_recall_f1(r, h, g);
      const auto b = precision_recall_f1(r * k, h * k, g * k);
      CHECK(*a.precision == doctest::Approx(*b.precision));
      CHECK(*a.recall == doctest::Approx(*b.recall));
      CHECK(a.f1.has_value() == b.f1.has_value());
      if (a.f1) {
        CHECK(*a.f1 == doctest::Approx(2 * *a.precision * *a.recall / (*a.precision + *a.recall)));
      }
    }
  }

  TEST_CASE("ground truth files") {
    const std::string csv =
        "id,provenance,guideline,description\n"
        "v1,llm-only,Emphasis,Title too small\n"
        "v2,both,Readability,\"Low contrast, placeholder\"\n"
        "v3,human-only,,\n";
    const auto truth = parse_ground_truth(csv, false);
    CHECK(truth.size() == 3);
    CHECK(truth.evaluator_helpful() == 2);
    CHECK(truth.entries[1].description == "Low contrast, placeholder");
    const auto m = metrics_from_ground_truth(truth, 4);
    CHECK(m.helpful == 2);
    CHECK(m.ground_truth == 3);

    const auto jsonl = parse_ground_truth(
        "{\"id\":\"v1\",\"provenance\":\"both\"}\n\n{\"id\":\"v2\",\"provenance\":\"human-only\"}\n", true);
    CHECK(jsonl.count(Provenance::Both) == 1);

    const auto dup = capture([&] { parse_ground_truth("id,provenance\nv1,both\nv1,both\n", false); });
    CHECK(dup.code() == ErrorCode::SchemaError);
    CHECK(dup.detail() == "2");
    CHECK(capture([&] { parse_ground_truth("id,provenance\nv1,robot\n", false); }).detail() == "1");
    CHECK(capture([&] { parse_ground_truth("id,provenance\n,both\n", false); }).code() ==
          ErrorCode::SchemaError);
  }

  TEST_CASE("ratings parsing and errors") {
    const std::string csv =
        "suggestion_id,rater_id,accuracy,helpfulness,explanation\n"
        "s1,r1,3,5,Clear and correct\n"
        "s2,r1,1,1,\"Wrong, the button is fine\"\n"
        "s3,r2,2,3,\n";
    const auto records = parse_ratings(csv, false);
    REQUIRE(records.size() == 3);
    CHECK(records[1].explanation == "Wrong, the button is fine");
    CHECK(records[2].round == 0);

    const auto bad = capture([] {
      parse_ratings("suggestion_id,rater_id,accuracy,helpfulness\ns1,r1,3,5\ns2,r1,4,5\n", false);
    });
    CHECK(bad.code() == ErrorCode::SchemaError);
    CHECK(bad.detail() == "2");
    CHECK(capture([] { parse_ratings("suggestion_id,rater_id,accuracy,helpfulness\ns1,r1,x,5\n", false); })
              .code() == ErrorCode::SchemaError);
    CHECK(capture([] { parse_ratings("suggestion_id,rater_id,accuracy,helpfulness\ns1,r1,3,0\n", false); })
              .code() == ErrorCode::SchemaError);
    CHECK(capture([] { parse_ratings("{\"suggestion_id\":\"s\"}\n", true); }).code() ==
          ErrorCode::SchemaError);
    CHECK(capture([] { parse_ratings("not json\n", true); }).detail() == "1");
    CHECK(capture([] { parse_ratings("a,b\n\"open", false); }).code() == ErrorCode::SchemaError);
  }

  TEST_CASE("ratings round trip through both formats") {
    const auto records = corpus::rated_suggestions(21, 120);
    for (bool jsonl : {false, true}) {
      const auto text = write_ratings(records, jsonl);
      CHECK(parse_ratings(text, jsonl) == records);
      const auto dir = testing::scratch_dir("ratings");
      const auto path = dir / (jsonl ? "r.jsonl" : "r.csv");
      testing::write_file(path, text);
      CHECK(load_ratings(path) == records);
      std::filesystem::remove_all(dir);
    }
  }

  TEST_CASE("distributions") {
    const auto split = corpus::published_split();
    const auto acc = rating_distribution(split, Dimension::Accuracy);
    REQUIRE(acc.buckets.size() == 3);
    CHECK(acc.buckets[0].label == "not accurate");
    CHECK(acc.buckets[0].percent == 29.0);
    CHECK(acc.buckets[1].percent == 19.0);
    CHECK(acc.buckets[2].percent == 52.0);
    CHECK(acc.grouped.empty());
    CHECK(acc.by_round.size() == 2);

    const auto help = rating_distribution(split, Dimension::Helpfulness);
    REQUIRE(help.grouped.size() == 3);
    CHECK(help.grouped[0].count == 49);
    CHECK(help.grouped[1].count == 15);
    CHECK(help.grouped[2].count == 36);

    std::vector<RatingRecord> all_accurate(7, RatingRecord{"s", "r", 3, 4, "", "", 0});
    const auto a = rating_distribution(all_accurate, Dimension::Accuracy);
    CHECK(a.buckets[2].percent == 100.0);
    CHECK(a.buckets[0].percent == 0.0);
    CHECK(a.by_round.empty());

    std::vector<RatingRecord> thirds{{"a", "r", 1, 1, "", "g", 1}, {"b", "r", 2, 1, "", "g", 1},
                                     {"c", "r", 3, 1, "", "h", 1}};
    const auto t = rating_distribution(thirds, Dimension::Accuracy);
    CHECK(t.buckets[0].percent == 33.333);
    CHECK(t.by_guideline.at("g")[0].count == 1);
    CHECK(nlohmann::json::parse(distribution_to_json(t)).contains("buckets"));
    CHECK(capture([] { rating_distribution({}, Dimension::Accuracy); }).code() == ErrorCode::EmptyInput);
  }

  TEST_CASE("round half even") {
    CHECK(round_half_even(0.0625, 3) == 0.062);
    CHECK(round_half_even(0.0635, 3) == 0.064);
    CHECK(round_half_even(2.5, 0) == 2.0);
    CHECK(round_half_even(3.5, 0) == 4.0);
    CHECK(round_half_even(0.46557, 3) == 0.466);
  }

  TEST_CASE("fleiss kappa") {
    CHECK(*fleiss_kappa({{3, 0}, {0, 3}, {3, 0}}, 3) == doctest::Approx(1.0));
    const std::vector<std::vector<long>> table{{2, 1, 0}, {0, 3, 0}, {1, 1, 1}, {0, 0, 3}};
    const auto k = fleiss_kappa(table, 3);
    REQUIRE(k.has_value());
    CHECK(std::abs(*k - static_cast<double>(*oracle::fleiss(table, 3))) < 1e-9);
    CHECK_FALSE(fleiss_kappa({{3, 0}, {3, 0}}, 3).has_value());
    CHECK(capture([] { fleiss_kappa({{2, 0}, {1, 1, 1}}, 2); }).code() == ErrorCode::RowSumMismatch);
    CHECK(capture([] { fleiss_kappa({{2, 0}, {1, 0}}, 2); }).detail() == "2");
    CHECK(capture([] { fleiss_kappa({{1, 0}}, 1); }).code() == ErrorCode::InvalidArgument);

    std::mt19937 rng(12);
    for (int round = 0; round < 300; ++round) {
      const long n = static_cast<long>(rng() % 6) + 2;
      const std::size_t cats = rng() % 4 + 2;
      std::vector<std::vector<long>> t(rng() % 20 + 1, std::vector<long>(cats, 0));
      for (auto& row : t) {
        for (long r = 0; r < n; ++r) ++row[rng() % cats];
      }
      const auto want = oracle::fleiss(t, n);
      const auto got = fleiss_kappa(t, n);
      REQUIRE(got.has_value() == want.has_value());
      if (got) CHECK(std::abs(*got - static_cast<double>(*want)) < 1e-9);
    }
  }

  TEST_CASE("kappa table from ratings") {
    std::vector<RatingRecord> rs{{"a", "r1", 3, 5, "", "", 0}, {"a", "r2", 3, 4, "", "", 0},
                                 {"b", "r1", 1, 1, "", "", 0}, {"b", "r2", 2, 1, "", "", 0}};
    const auto t = kappa_table(rs, Dimension::Accuracy);
    CHECK(t == std::vector<std::vector<long>>{{0, 0, 2}, {1, 1, 0}});
    CHECK(kappa_table(rs, Dimension::Helpfulness)[1] == std::vector<long>{2, 0, 0, 0, 0});
  }

  TEST_CASE("tokenizer") {
    CHECK(tokenize("The BUTTON's label, café-2px!") ==
          std::vector<std::string>{"the", "button", "s", "label", "café", "2px"});
    CHECK(tokenize("").empty());
  }

  TEST_CASE("word counts on a single word corpus") {
    std::vector<RatingRecord> rs{{"a", "r", 3, 5, "label", "", 0}, {"b", "r", 1, 1, "the label", "", 0}};
    const auto r = word_count_analysis(rs, 5, default_stopwords(), default_drop_words());
    CHECK(words_of(r.accurate) == std::vector<std::string>{"label"});
    CHECK(words_of(r.unhelpful) == std::vector<std::string>{"label"});
    CHECK(r.accurate_only.empty());
    CHECK(r.inaccurate_only.empty());
    CHECK(r.helpful_only.empty());
    CHECK(r.unhelpful_only.empty());
    CHECK(capture([] { word_count_analysis({}, 5, {}, {}); }).code() == ErrorCode::EmptyInput);
  }

  TEST_CASE("word counts match the counting oracle") {
    const auto records = corpus::rated_suggestions(5, 200);
    const auto stop = default_stopwords();
    const auto drop = default_drop_words();
    std::set<std::string> skip(stop.begin(), stop.end());
    skip.insert(drop.begin(), drop.end());
    const std::size_t k = 10;
    const auto r = word_count_analysis(records, k, stop, drop);

    auto texts = [&](auto pred) {
      std::vector<std::string> out;
      for (const auto& rec : records) {
        if (pred(rec)) out.push_back(rec.explanation);
      }
      return out;
    };
    auto top = [&](auto pred) { return oracle::top_k(oracle::count_words(texts(pred), skip), k); };
    CHECK(r.accurate == top([](const RatingRecord& x) { return x.accuracy == 3; }));
    CHECK(r.inaccurate == top([](const RatingRecord& x) { return x.accuracy == 1; }));
    CHECK(r.helpful == top([](const RatingRecord& x) { return x.helpfulness >= 4; }));
    CHECK(r.unhelpful == top([](const RatingRecord& x) { return x.helpfulness == 1; }));
    for (const auto& w : r.helpful_only) {
      const auto u = words_of(r.unhelpful);
      CHECK(std::find(u.begin(), u.end(), w) == u.end());
    }
    const auto j = nlohmann::json::parse(word_counts_to_json(r));
    CHECK(j.contains("accurate"));
  }

  TEST_CASE("moderate ratings are left out of word buckets") {
    std::vector<RatingRecord> rs{{"a", "r", 2, 3, "middle", "", 0}, {"b", "r", 2, 2, "middle", "", 0},
                                 {"c", "r", 3, 4, "top", "", 0}, {"d", "r", 1, 1, "bottom", "", 0}};
    const auto r = word_count_analysis(rs, 5, {}, {});
    CHECK(words_of(r.helpful) == std::vector<std::string>{"top"});
    CHECK(words_of(r.unhelpful) == std::vector<std::string>{"bottom"});
    CHECK(words_of(r.accurate) == std::vector<std::string>{"top"});
    CHECK(words_of(r.inaccurate) == std::vector<std::string>{"bottom"});
  }
}
