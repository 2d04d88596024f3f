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


#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace heurex::analysis {

// Precision / recall ---------------------------------------------------------

/// Absent values mark a zero denominator (or P + R = 0 for F1).
struct MetricsReport {
  long reported = 0;
  long helpful = 0;
  long ground_truth = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

/// P = helpful / reported, R = helpful / ground_truth. Throws
/// Error(InvalidCounts) for negative counts or helpful above either total.
MetricsReport precision_recall_f1(long reported, long helpful, long ground_truth);

enum class Provenance { LlmOnly, Both, HumanOnly };
std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view name);

struct GroundTruthEntry {
  std::string id;
  Provenance provenance = Provenance::Both;
  std::string guideline;
  std::string description;

  bool operator==(const GroundTruthEntry&) const = default;
};

struct GroundTruth {
  std::vector<GroundTruthEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::size_t count(Provenance p) const;
  /// Evaluator findings that made it into the ground truth.
  std::size_t evaluator_helpful() const {
    return count(Provenance::LlmOnly) + count(Provenance::Both);
  }
};

/// CSV (header id,provenance[,guideline,description]) or JSON lines.
/// Throws Error(SchemaError) with the 1-based data row as detail.
GroundTruth parse_ground_truth(std::string_view text, bool jsonl);
GroundTruth load_ground_truth(const std::filesystem::path& path);

MetricsReport metrics_from_ground_truth(const GroundTruth& truth, long reported);

// Ratings ------------------------------------------------------------------

struct RatingRecord {
  std::string suggestion_id;
  std::string rater_id;
  int accuracy = 1;     // 1 not, 2 partially, 3 accurate
  int helpfulness = 1;  // 1 not at all .. 5 very helpful
  std::string explanation;
  std::string guideline;  // optional metadata
  int round = 0;          // 0 when unknown

  bool operator==(const RatingRecord&) const = default;
};

enum class Dimension { Accuracy, Helpfulness };
Dimension dimension_from_string(std::string_view name);

/// Columns suggestion_id,rater_id,accuracy,helpfulness[,explanation,guideline,round].
std::vector<RatingRecord> parse_ratings(std::string_view text, bool jsonl);
std::vector<RatingRecord> load_ratings(const std::filesystem::path& path);
std::string write_ratings(const std::vector<RatingRecord>& records, bool jsonl);

/// Round half to even at `digits` decimals.
double round_half_even(double value, int digits = 3);

struct Bucket {
  std::string label;
  std::size_t count = 0;
  double percent = 0;  // rounded to 3 decimals
};

struct Distribution {
  std::vector<Bucket> buckets;
  /// Helpfulness only: helpful (4-5), moderate (2-3), unhelpful (1).
  std::vector<Bucket> grouped;
  std::map<std::string, std::vector<Bucket>> by_guideline;
  std::map<int, std::vector<Bucket>> by_round;
};

Distribution rating_distribution(const std::vector<RatingRecord>& records, Dimension dimension);

// Agreement ----------------------------------------------------------------

/// Fleiss' kappa over an items x categories count table where every row
/// sums to `raters`. Absent when expected agreement is 1.
std::optional<double> fleiss_kappa(const std::vector<std::vector<long>>& table, long raters);

/// Items x scale-points table from ratings grouped by suggestion id.
std::vector<std::vector<long>> kappa_table(const std::vector<RatingRecord>& records,
                                           Dimension dimension);

// Word counts --------------------------------------------------------------

std::vector<std::string> default_stopwords();
std::vector<std::string> default_drop_words();

/// Lowercased tokens split on ASCII non-alphanumerics. Bytes at or above
/// 0x80 count as word characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

using WordCounts = std::vector<std::pair<std::string, std::size_t>>;

struct WordCountReport {
  WordCounts accurate;
  WordCounts inaccurate;
  WordCounts helpful;
  WordCounts unhelpful;
  std::vector<std::string> accurate_only;  // top(accurate) \ top(inaccurate)
  std::vector<std::string> inaccurate_only;
  std::vector<std::string> helpful_only;
  std::vector<std::string> unhelpful_only;
};

/// Accurate = accuracy 3, inaccurate = accuracy 1, helpful = helpfulness
/// 4 or 5, unhelpful = helpfulness 1. Lists are top-k by count with ties
/// broken alphabetically.
WordCountReport word_count_analysis(const std::vector<RatingRecord>& records, std::size_t k,
                                    const std::vector<std::string>& stopwords,
                                    const std::vector<std::string>& drop_words);

std::string metrics_to_json(const MetricsReport& m);
std::string distribution_to_json(const Distribution& d);
std::string word_counts_to_json(const WordCountReport& r);

}  // namespace heurex::analysis
