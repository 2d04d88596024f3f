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


#include "heurex/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"
#include "embedded_data.hpp"
#include "heurex/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace heurex::analysis {

using nlohmann::ordered_json;

MetricsReport precision_recall_f1(long reported, long helpful, long ground_truth) {
  if (reported < 0 || helpful < 0 || ground_truth < 0) {
    throw Error(ErrorCode::InvalidCounts, "counts must be non-negative");
  }
  if (helpful > reported || helpful > ground_truth) {
    throw Error(ErrorCode::InvalidCounts,
                "helpful count exceeds reported or ground-truth size",
                std::to_string(reported) + "," + std::to_string(helpful) + "," +
                    std::to_string(ground_truth));
  }
  MetricsReport m{reported, helpful, ground_truth, {}, {}, {}};
  if (reported > 0) m.precision = static_cast<double>(helpful) / static_cast<double>(reported);
  if (ground_truth > 0) m.recall = static_cast<double>(helpful) / static_cast<double>(ground_truth);
  if (m.precision && m.recall && *m.precision + *m.recall > 0) {
    m.f1 = 2 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::LlmOnly: return "llm-only";
    case Provenance::Both: return "both";
    case Provenance::HumanOnly: return "human-only";
  }
  return "both";
}

Provenance provenance_from_string(std::string_view name) {
  const auto n = text::lower(text::trim(name));
  if (n == "llm-only") return Provenance::LlmOnly;
  if (n == "both") return Provenance::Both;
  if (n == "human-only") return Provenance::HumanOnly;
  throw Error(ErrorCode::SchemaError, "unknown provenance " + std::string(name));
}

std::size_t GroundTruth::count(Provenance p) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [p](const GroundTruthEntry& e) { return e.provenance == p; }));
}

MetricsReport metrics_from_ground_truth(const GroundTruth& truth, long reported) {
  return precision_recall_f1(reported, static_cast<long>(truth.evaluator_helpful()),
                             static_cast<long>(truth.size()));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string(), path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_jsonl_path(const std::filesystem::path& path) {
  const auto ext = text::lower(path.extension().string());
  return ext == ".jsonl" || ext == ".ndjson" || ext == ".json";
}

[[noreturn]] void schema_error(std::size_t row, const std::string& what) {
  throw Error(ErrorCode::SchemaError, "row " + std::to_string(row) + ": " + what,
              std::to_string(row));
}

/// One logical record as column -> text, whatever the file format.
using Fields = std::map<std::string, std::string>;

std::vector<Fields> read_records(std::string_view text, bool jsonl) {
  std::vector<Fields> out;
  if (jsonl) {
    std::size_t row = 0;
    for (const auto& line : text::split_lines(text)) {
      if (text::trim(line).empty()) continue;
      ++row;
      auto j = ordered_json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) schema_error(row, "not a JSON object");
      Fields f;
      for (const auto& [key, value] : j.items()) {
        if (value.is_string()) {
          f[key] = value.get<std::string>();
        } else if (value.is_number_integer()) {
          f[key] = std::to_string(value.get<long long>());
        } else if (!value.is_null()) {
          f[key] = value.dump();
        }
      }
      out.push_back(std::move(f));
    }
    return out;
  }
  const auto rows = csv::parse(text);
  if (rows.empty()) return out;
  std::vector<std::string> header;
  for (const auto& h : rows.front().fields) header.push_back(text::lower(text::trim(h)));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r].fields;
    if (fields.size() > header.size()) schema_error(r, "more fields than header columns");
    Fields f;
    for (std::size_t c = 0; c < fields.size(); ++c) f[header[c]] = fields[c];
    out.push_back(std::move(f));
  }
  return out;
}

const std::string& required(const Fields& f, const std::string& key, std::size_t row) {
  auto it = f.find(key);
  if (it == f.end() || text::trim(it->second).empty()) schema_error(row, "missing " + key);
  return it->second;
}

std::string optional_field(const Fields& f, const std::string& key) {
  auto it = f.find(key);
  return it == f.end() ? std::string() : it->second;
}

int parse_int(const std::string& text_value, const std::string& key, std::size_t row) {
  const auto t = text::trim(text_value);
  int value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    schema_error(row, key + " is not an integer: " + t);
  }
  return value;
}

}  // namespace

GroundTruth parse_ground_truth(std::string_view text, bool jsonl) {
  GroundTruth truth;
  std::unordered_set<std::string> seen;
  std::size_t row = 0;
  for (const auto& f : read_records(text, jsonl)) {
    ++row;
    GroundTruthEntry e;
    e.id = required(f, "id", row);
    try {
      e.provenance = provenance_from_string(required(f, "provenance", row));
    } catch (const Error&) {
      schema_error(row, "unknown provenance " + optional_field(f, "provenance"));
    }
    e.guideline = optional_field(f, "guideline");
    e.description = optional_field(f, "description");
    if (!seen.insert(e.id).second) schema_error(row, "duplicate violation id " + e.id);
    truth.entries.push_back(std::move(e));
  }
  return truth;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  return parse_ground_truth(read_file(path), is_jsonl_path(path));
}

std::vector<RatingRecord> parse_ratings(std::string_view text, bool jsonl) {
  std::vector<RatingRecord> records;
  std::size_t row = 0;
  for (const auto& f : read_records(text, jsonl)) {
    ++row;
    RatingRecord r;
    r.suggestion_id = required(f, "suggestion_id", row);
    r.rater_id = required(f, "rater_id", row);
    r.accuracy = parse_int(required(f, "accuracy", row), "accuracy", row);
    r.helpfulness = parse_int(required(f, "helpfulness", row), "helpfulness", row);
    if (r.accuracy < 1 || r.accuracy > 3) schema_error(row, "accuracy must be 1..3");
    if (r.helpfulness < 1 || r.helpfulness > 5) schema_error(row, "helpfulness must be 1..5");
    r.explanation = optional_field(f, "explanation");
    r.guideline = optional_field(f, "guideline");
    if (auto round = optional_field(f, "round"); !text::trim(round).empty()) {
      r.round = parse_int(round, "round", row);
      if (r.round < 0) schema_error(row, "round must be non-negative");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RatingRecord> load_ratings(const std::filesystem::path& path) {
  return parse_ratings(read_file(path), is_jsonl_path(path));
}

std::string write_ratings(const std::vector<RatingRecord>& records, bool jsonl) {
  std::string out;
  if (!jsonl) {
    out = "suggestion_id,rater_id,accuracy,helpfulness,explanation,guideline,round\n";
  }
  for (const auto& r : records) {
    if (jsonl) {
      ordered_json j{{"suggestion_id", r.suggestion_id}, {"rater_id", r.rater_id},
                     {"accuracy", r.accuracy},           {"helpfulness", r.helpfulness},
                     {"explanation", r.explanation},     {"guideline", r.guideline},
                     {"round", r.round}};
      out += j.dump() + "\n";
    } else {
      out += csv::join({r.suggestion_id, r.rater_id, std::to_string(r.accuracy),
                        std::to_string(r.helpfulness), r.explanation, r.guideline,
                        std::to_string(r.round)}) +
             "\n";
    }
  }
  return out;
}

Dimension dimension_from_string(std::string_view name) {
  const auto n = text::lower(name);
  if (n == "accuracy") return Dimension::Accuracy;
  if (n == "helpfulness") return Dimension::Helpfulness;
  throw Error(ErrorCode::InvalidArgument, "unknown rating dimension " + std::string(name));
}

double round_half_even(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  const double x = value * scale;
  const double fl = std::floor(x);
  const double diff = x - fl;
  double r;
  if (std::fabs(diff - 0.5) < 1e-9) {
    r = std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1;
  } else {
    r = std::round(x);
  }
  return r / scale;
}

namespace {

struct Scale {
  int points;
  std::vector<std::string> labels;
};

Scale scale_for(Dimension d) {
  if (d == Dimension::Accuracy) return {3, {"not accurate", "partially accurate", "accurate"}};
  return {5, {"1", "2", "3", "4", "5"}};
}

int score(const RatingRecord& r, Dimension d) {
  return d == Dimension::Accuracy ? r.accuracy : r.helpfulness;
}

std::vector<Bucket> make_buckets(const std::vector<std::string>& labels,
                                 const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  std::vector<Bucket> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(counts[i]) / total;
    out.push_back({labels[i], counts[i], round_half_even(pct, 3)});
  }
  return out;
}

std::vector<Bucket> buckets_for(const std::vector<const RatingRecord*>& records, Dimension d) {
  const auto scale = scale_for(d);
  std::vector<std::size_t> counts(scale.points, 0);
  for (const auto* r : records) ++counts[score(*r, d) - 1];
  return make_buckets(scale.labels, counts);
}

}  // namespace

Distribution rating_distribution(const std::vector<RatingRecord>& records, Dimension dimension) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no rating records");
  const auto scale = scale_for(dimension);
  std::vector<const RatingRecord*> all;
  std::map<std::string, std::vector<const RatingRecord*>> by_guideline;
  std::map<int, std::vector<const RatingRecord*>> by_round;
  for (const auto& r : records) {
    const int s = score(r, dimension);
    if (s < 1 || s > scale.points) {
      throw Error(ErrorCode::SchemaError, "rating out of scale for " + r.suggestion_id);
    }
    all.push_back(&r);
    if (!r.guideline.empty()) by_guideline[r.guideline].push_back(&r);
    if (r.round > 0) by_round[r.round].push_back(&r);
  }
  Distribution d;
  d.buckets = buckets_for(all, dimension);
  if (dimension == Dimension::Helpfulness) {
    std::vector<std::size_t> grouped(3, 0);
    for (const auto* r : all) {
      ++grouped[r->helpfulness >= 4 ? 0 : r->helpfulness >= 2 ? 1 : 2];
    }
    d.grouped = make_buckets({"helpful", "moderate", "unhelpful"}, grouped);
  }
  for (const auto& [key, rs] : by_guideline) d.by_guideline[key] = buckets_for(rs, dimension);
  for (const auto& [key, rs] : by_round) d.by_round[key] = buckets_for(rs, dimension);
  return d;
}

std::optional<double> fleiss_kappa(const std::vector<std::vector<long>>& table, long raters) {
  if (raters < 2) throw Error(ErrorCode::InvalidArgument, "fleiss kappa needs at least 2 raters");
  if (table.empty()) throw Error(ErrorCode::EmptyInput, "kappa table has no items");
  const std::size_t categories = table.front().size();
  std::vector<double> column(categories, 0.0);
  double p_bar = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& row = table[i];
    if (row.size() != categories) {
      throw Error(ErrorCode::RowSumMismatch, "row " + std::to_string(i + 1) + " has " +
                      std::to_string(row.size()) + " categories", std::to_string(i + 1));
    }
    long sum = 0;
    double squares = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      if (row[j] < 0) {
        throw Error(ErrorCode::RowSumMismatch, "negative count", std::to_string(i + 1));
      }
      sum += row[j];
      squares += static_cast<double>(row[j]) * row[j];
      column[j] += row[j];
    }
    if (sum != raters) {
      throw Error(ErrorCode::RowSumMismatch,
                  "row " + std::to_string(i + 1) + " sums to " + std::to_string(sum) +
                      ", expected " + std::to_string(raters),
                  std::to_string(i + 1));
    }
    p_bar += (squares - raters) / (static_cast<double>(raters) * (raters - 1));
  }
  const double items = static_cast<double>(table.size());
  p_bar /= items;
  double p_e = 0.0;
  for (double c : column) {
    const double p = c / (items * raters);
    p_e += p * p;
  }
  if (std::fabs(1.0 - p_e) < 1e-12) return std::nullopt;
  return (p_bar - p_e) / (1.0 - p_e);
}

std::vector<std::vector<long>> kappa_table(const std::vector<RatingRecord>& records,
                                           Dimension dimension) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no rating records");
  const auto scale = scale_for(dimension);
  std::vector<std::vector<long>> table;
  std::unordered_map<std::string, std::size_t> row_of;
  for (const auto& r : records) {
    auto [it, inserted] = row_of.emplace(r.suggestion_id, table.size());
    if (inserted) table.emplace_back(scale.points, 0);
    ++table[it->second][score(r, dimension) - 1];
  }
  return table;
}

// ---------------------------------------------------------------------------
// Word counts

std::vector<std::string> default_stopwords() {
  std::vector<std::string> words;
  for (const auto& line : text::split_lines(embedded::stopwords())) {
    auto w = text::lower(text::trim(line));
    if (!w.empty() && w[0] != '#') words.push_back(std::move(w));
  }
  return words;
}

std::vector<std::string> default_drop_words() { return {"interface", "guideline"}; }

std::vector<std::string> tokenize(std::string_view input) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char c : input) {
    if (c >= 0x80 || std::isalnum(c)) {
      current += static_cast<char>(c >= 0x80 ? c : std::tolower(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

namespace {

WordCounts top_k(const std::unordered_map<std::string, std::size_t>& counts, std::size_t k) {
  WordCounts all(counts.begin(), counts.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<std::string> difference(const WordCounts& a, const WordCounts& b) {
  std::set<std::string> in_b;
  for (const auto& [w, _] : b) in_b.insert(w);
  std::vector<std::string> out;
  for (const auto& [w, _] : a) {
    if (!in_b.count(w)) out.push_back(w);
  }
  return out;
}

}  // namespace

WordCountReport word_count_analysis(const std::vector<RatingRecord>& records, std::size_t k,
                                    const std::vector<std::string>& stopwords,
                                    const std::vector<std::string>& drop_words) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no rated suggestions");
  std::unordered_set<std::string> skip;
  for (const auto& w : stopwords) skip.insert(text::lower(w));
  for (const auto& w : drop_words) skip.insert(text::lower(w));

  std::unordered_map<std::string, std::size_t> accurate, inaccurate, helpful, unhelpful;
  for (const auto& r : records) {
    for (const auto& token : tokenize(r.explanation)) {
      if (skip.count(token)) continue;
      if (r.accuracy == 3) ++accurate[token];
      if (r.accuracy == 1) ++inaccurate[token];
      if (r.helpfulness >= 4) ++helpful[token];
      if (r.helpfulness == 1) ++unhelpful[token];
    }
  }
  WordCountReport report;
  report.accurate = top_k(accurate, k);
  report.inaccurate = top_k(inaccurate, k);
  report.helpful = top_k(helpful, k);
  report.unhelpful = top_k(unhelpful, k);
  report.accurate_only = difference(report.accurate, report.inaccurate);
  report.inaccurate_only = difference(report.inaccurate, report.accurate);
  report.helpful_only = difference(report.helpful, report.unhelpful);
  report.unhelpful_only = difference(report.unhelpful, report.helpful);
  return report;
}

// ---------------------------------------------------------------------------
// JSON views

namespace {

ordered_json maybe(const std::optional<double>& v) {
  return v ? ordered_json(round_half_even(*v, 3)) : ordered_json(nullptr);
}

ordered_json buckets_json(const std::vector<Bucket>& buckets) {
  ordered_json out = ordered_json::array();
  for (const auto& b : buckets) {
    out.push_back({{"label", b.label}, {"count", b.count}, {"percent", b.percent}});
  }
  return out;
}

ordered_json counts_json(const WordCounts& counts) {
  ordered_json out = ordered_json::array();
  for (const auto& [w, c] : counts) out.push_back({{"word", w}, {"count", c}});
  return out;
}

}  // namespace

std::string metrics_to_json(const MetricsReport& m) {
  ordered_json j{{"reported", m.reported},
                 {"helpful", m.helpful},
                 {"ground_truth", m.ground_truth},
                 {"precision", maybe(m.precision)},
                 {"recall", maybe(m.recall)},
                 {"f1", maybe(m.f1)}};
  return j.dump(2);
}

std::string distribution_to_json(const Distribution& d) {
  ordered_json j;
  j["buckets"] = buckets_json(d.buckets);
  if (!d.grouped.empty()) j["grouped"] = buckets_json(d.grouped);
  j["by_guideline"] = ordered_json::object();
  for (const auto& [k, v] : d.by_guideline) j["by_guideline"][k] = buckets_json(v);
  j["by_round"] = ordered_json::object();
  for (const auto& [k, v] : d.by_round) j["by_round"][std::to_string(k)] = buckets_json(v);
  return j.dump(2);
}

std::string word_counts_to_json(const WordCountReport& r) {
  ordered_json j{{"accurate", counts_json(r.accurate)},
                 {"inaccurate", counts_json(r.inaccurate)},
                 {"helpful", counts_json(r.helpful)},
                 {"unhelpful", counts_json(r.unhelpful)},
                 {"accurate_only", r.accurate_only},
                 {"inaccurate_only", r.inaccurate_only},
                 {"helpful_only", r.helpful_only},
                 {"unhelpful_only", r.unhelpful_only}};
  return j.dump(2);
}

}  // namespace heurex::analysis
