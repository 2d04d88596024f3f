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


// heurex command line: evaluation, linting, labels, the review service,
// prompt ablations and the analysis toolkit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "heurex/analysis.hpp"
#include "heurex/condenser.hpp"
#include "heurex/design_tree.hpp"
#include "heurex/error.hpp"
#include "heurex/guidelines.hpp"
#include "heurex/llm_pipeline.hpp"
#include "heurex/report.hpp"
#include "heurex/rule_engine.hpp"
#include "heurex/service.hpp"
#include "heurex/session.hpp"
#include "heurex/transport.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace heurex;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path, path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path, path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::shared_ptr<llm::CompletionTransport> make_transport(const std::string& spec) {
  if (spec.empty()) return nullptr;
  if (spec.rfind("scripted:", 0) == 0) {
    return std::make_shared<llm::ScriptedTransport>(
        llm::ScriptedTransport::from_file(spec.substr(9)));
  }
  if (spec == "http") {
    return std::make_shared<llm::HttpTransport>(llm::HttpTransportConfig::from_env());
  }
  throw Error(ErrorCode::InvalidArgument, "transport must be scripted:<file> or http", spec);
}

struct GuidelineArgs {
  std::string ids = "nielsen";
  std::vector<std::string> files;

  std::vector<guidelines::GuidelineSet> load() const {
    std::vector<guidelines::GuidelineSet> sets;
    if (!ids.empty() && ids != "none") sets = guidelines::select_builtin(ids);
    for (const auto& file : files) {
      const auto text = read_file(file);
      const auto ext = fs::path(file).extension();
      if (ext == ".json") {
        sets.push_back(guidelines::parse_set_json(text));
      } else {
        sets.push_back(guidelines::parse_custom(text, guidelines::slugify(fs::path(file).stem().string())));
      }
    }
    if (sets.empty()) throw Error(ErrorCode::InvalidArgument, "no guidelines selected");
    return sets;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--guidelines", ids, "Builtin sets: nielsen,crowdcrit,semantic (or none)")
        ->capture_default_str();
    cmd->add_option("--guidelines-file", files,
                    "Guideline set as JSON or as a numbered/bulleted text list");
  }
};

/// Rule tolerances plus an optional token_budget line.
struct Config {
  rules::RuleConfig rules;
  std::optional<std::size_t> budget;
};

Config load_config(const std::string& path) {
  Config cfg;
  if (path.empty()) return cfg;
  std::string rest;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    const auto key_end = line.find_first_of(" \t=");
    if (eq != std::string::npos && line.compare(0, key_end, "token_budget") == 0) {
      try {
        const long v = std::stol(line.substr(eq + 1));
        if (v <= 0) throw std::out_of_range("token_budget");
        cfg.budget = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "token_budget must be a positive integer");
      }
      continue;
    }
    rest += line + "\n";
  }
  cfg.rules = rules::parse_config(rest);
  return cfg;
}

int fail(const Error& e) {
  std::cerr << error_to_json(e) << std::endl;
  switch (e.code()) {
    case ErrorCode::Transport:
    case ErrorCode::UnparseableResponse:
    case ErrorCode::CountMismatch:
    case ErrorCode::MissingSegment:
    case ErrorCode::MissingLabel:
    case ErrorCode::UnknownLabelId:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heurex: heuristic evaluation of UI mockups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "heurex 0.1.0");

  // evaluate --------------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "Run one review round on a design");
  std::string design_path, out_path, transport_spec, engine_name = "llm", config_path,
                                                      session_path, session_id = "cli",
                                                      format = "json";
  std::optional<std::size_t> budget;
  bool suppress_same = false;
  GuidelineArgs eval_guidelines;
  evaluate->add_option("--design", design_path, "Design document JSON")->required();
  eval_guidelines.attach(evaluate);
  evaluate->add_option("--engine", engine_name, "llm or rules")
      ->check(CLI::IsMember({"llm", "rules"}))
      ->capture_default_str();
  evaluate->add_option("--transport", transport_spec, "scripted:<file> or http");
  evaluate->add_option("--budget", budget, "Prompt token budget");
  evaluate->add_option("--config", config_path, "key = value rule tolerances and token_budget");
  evaluate->add_option("--session", session_path,
                       "Session file; continued when it exists, written afterwards");
  evaluate->add_option("--session-id", session_id, "Id for a new session")->capture_default_str();
  evaluate->add_flag("--suppress-same-nodes", suppress_same,
                     "Also hide suggestions citing exactly the elements of a dismissed one");
  evaluate->add_option("--format", format, "json or markdown")
      ->check(CLI::IsMember({"json", "markdown"}))
      ->capture_default_str();
  evaluate->add_option("--out", out_path, "Output file (default stdout)");

  // dismiss ---------------------------------------------------------------
  auto* dismiss = app.add_subcommand("dismiss", "Dismiss a suggestion in a saved session");
  std::string dismiss_session, suggestion_id, dismiss_transport;
  dismiss->add_option("--session", dismiss_session, "Session file")->required();
  dismiss->add_option("--suggestion", suggestion_id, "Suggestion id")->required();
  dismiss->add_option("--transport", dismiss_transport, "scripted:<file> or http");

  // lint ------------------------------------------------------------------
  auto* lint = app.add_subcommand("lint", "Run the layout rules and print raw findings");
  std::string lint_design, lint_config, lint_out;
  GuidelineArgs lint_guidelines;
  lint_guidelines.ids = "nielsen,crowdcrit";
  lint->add_option("--design", lint_design, "Design document JSON")->required();
  lint_guidelines.attach(lint);
  lint->add_option("--config", lint_config, "key = value rule tolerances");
  lint->add_option("--out", lint_out, "Output file (default stdout)");

  // condense --------------------------------------------------------------
  auto* condense_cmd = app.add_subcommand("condense", "Print the condensed UI JSON of a design");
  std::string condense_design, condense_out;
  condense_cmd->add_option("--design", condense_design, "Design document JSON")->required();
  condense_cmd->add_option("--out", condense_out, "Output file (default stdout)");

  // labels ----------------------------------------------------------------
  auto* labels = app.add_subcommand("labels", "Name unnamed groups with the language model");
  std::string labels_design, labels_transport = "http", labels_out;
  bool labels_apply = false;
  labels->add_option("--design", labels_design, "Design document JSON")->required();
  labels->add_option("--transport", labels_transport, "scripted:<file> or http")
      ->capture_default_str();
  labels->add_flag("--apply", labels_apply, "Write the renamed design instead of the id map");
  labels->add_option("--out", labels_out, "Output file (default stdout)");

  // serve -----------------------------------------------------------------
  auto* serve = app.add_subcommand("serve", "Serve the review API over HTTP");
  int port = 8080;
  std::string host = "127.0.0.1", serve_transport, state_dir;
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--transport", serve_transport, "scripted:<file> or http");
  serve->add_option("--state-dir", state_dir, "Directory for session files");

  // ablate ----------------------------------------------------------------
  auto* ablate = app.add_subcommand("ablate", "Write the prompt of each composition condition");
  std::string ablate_design, ablate_out = ".";
  std::vector<std::string> conditions;
  GuidelineArgs ablate_guidelines;
  ablate->add_option("--design", ablate_design, "Design document JSON")->required();
  ablate_guidelines.attach(ablate);
  ablate->add_option("--condition", conditions,
                     "complete, one-call, no-heuristics, general-feedback (default all)");
  ablate->add_option("--out-dir", ablate_out, "Directory for <condition>.json")
      ->capture_default_str();

  // analyze ---------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "Rating and agreement analysis");
  analyze->require_subcommand(1);
  std::string an_in, an_out, dimension = "accuracy", table_path, stopwords_path;
  long reported = -1, helpful = -1, truth_size = -1;
  long raters = 0;
  std::size_t top_k = 20;
  std::vector<std::string> drop_words;
  bool no_default_drop = false;

  auto* metrics = analyze->add_subcommand("metrics", "Precision, recall and F1");
  metrics->add_option("--reported", reported, "Violations reported by the evaluator")->required();
  metrics->add_option("--helpful", helpful, "Reported violations judged helpful");
  metrics->add_option("--ground-truth", truth_size, "Size of the ground-truth set");
  metrics->add_option("--in", an_in, "Ground-truth CSV or JSONL (replaces the two counts)");
  metrics->add_option("--out", an_out, "Output file (default stdout)");

  auto* kappa = analyze->add_subcommand("kappa", "Fleiss' kappa");
  kappa->add_option("--in", an_in, "Ratings CSV or JSONL");
  kappa->add_option("--table", table_path, "JSON items x categories count table");
  kappa->add_option("--raters", raters, "Raters per item (default: first row sum)");
  kappa->add_option("--dimension", dimension, "accuracy or helpfulness")->capture_default_str();
  kappa->add_option("--out", an_out, "Output file (default stdout)");

  auto* ratings = analyze->add_subcommand("ratings", "Rating distribution with breakdowns");
  ratings->add_option("--in", an_in, "Ratings CSV or JSONL")->required();
  ratings->add_option("--dimension", dimension, "accuracy or helpfulness")->capture_default_str();
  ratings->add_option("--out", an_out, "Output file (default stdout)");

  auto* words = analyze->add_subcommand("words", "Top words per rating category");
  words->add_option("--in", an_in, "Ratings CSV or JSONL")->required();
  words->add_option("--k", top_k, "List length")->capture_default_str();
  words->add_option("--stopwords", stopwords_path, "One word per line (default: bundled list)");
  words->add_option("--drop", drop_words, "Extra words to ignore");
  words->add_flag("--no-default-drop", no_default_drop, "Do not drop interface/guideline");
  words->add_option("--out", an_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*evaluate) {
      const auto doc = design::parse_document(read_file(design_path));
      const auto cfg = load_config(config_path);
      session::SessionState state;
      if (!session_path.empty() && fs::exists(session_path)) {
        state = session::load_session(read_file(session_path));
      } else {
        session::SessionOptions opts;
        opts.rule_config = cfg.rules;
        opts.suppress_same_nodes = suppress_same;
        opts.reflection = transport_spec.rfind("scripted:", 0) == 0
                              ? session::ReflectionSource::Stub
                              : session::ReflectionSource::Transport;
        state = session::create_session(session_id, doc, eval_guidelines.load(),
                                        session::engine_from_string(engine_name),
                                        budget ? budget : cfg.budget, opts);
      }
      auto transport = make_transport(transport_spec);
      const auto& round = session::run_round(state, doc, transport.get());
      const auto rep = report::make_report(state, round);
      if (!session_path.empty()) write_output(session_path, session::save_session(state));
      write_output(out_path, format == "markdown" ? report::render_report_markdown(rep)
                                                  : report::report_to_json(rep));
    } else if (*dismiss) {
      auto state = session::load_session(read_file(dismiss_session));
      auto transport = make_transport(dismiss_transport);
      const auto& record = session::dismiss(state, suggestion_id, transport.get());
      ordered_json out{{"suggestion_id", record.suggestion_id},
                       {"round", record.round_number},
                       {"missing_nodes", record.missing_nodes}};
      write_output(dismiss_session, session::save_session(state));
      std::cout << out.dump(2) << '\n';
    } else if (*lint) {
      const auto doc = design::parse_document(read_file(lint_design));
      const auto cfg = load_config(lint_config);
      write_output(lint_out, rules::findings_to_json(
                                 rules::run_rules(doc, lint_guidelines.load(), cfg.rules)));
    } else if (*condense_cmd) {
      const auto doc = design::parse_document(read_file(condense_design));
      write_output(condense_out, condense::condense(doc).text);
    } else if (*labels) {
      const auto doc = design::parse_document(read_file(labels_design));
      auto transport = make_transport(labels_transport);
      const auto names = llm::generate_labels(doc, *transport);
      if (labels_apply) {
        write_output(labels_out, design::serialize_document(design::rename_nodes(
                                     doc, {names.begin(), names.end()})));
      } else {
        ordered_json out = ordered_json::object();
        for (const auto& [id, name] : names) out[id] = name;
        write_output(labels_out, out.dump(2));
      }
    } else if (*serve) {
      service::ServiceOptions opts;
      if (!state_dir.empty()) opts.state_dir = state_dir;
      if (serve_transport.rfind("scripted:", 0) == 0) {
        opts.session_options.reflection = session::ReflectionSource::Stub;
      }
      service::Service svc(make_transport(serve_transport), opts);
      std::cerr << "heurex listening on " << host << ':' << port << std::endl;
      service::serve(svc, host, port);
    } else if (*ablate) {
      const auto doc = design::parse_document(read_file(ablate_design));
      const auto ui = condense::condense(doc);
      const auto sets = ablate_guidelines.load();
      std::vector<llm::AblationCondition> selected;
      for (const auto& name : conditions) selected.push_back(llm::ablation_from_string(name));
      if (selected.empty()) selected = llm::all_ablation_conditions();
      for (auto condition : selected) {
        const auto prompt = llm::ablation_condition(condition, ui, sets);
        ordered_json j;
        j["condition"] = llm::to_string(condition);
        j["calls"] = prompt.calls;
        j["messages"] = ordered_json::parse(llm::messages_to_json(prompt.messages));
        const auto file = fs::path(ablate_out) / (std::string(llm::to_string(condition)) + ".json");
        write_output(file.string(), j.dump(2));
        std::cout << file.string() << '\n';
      }
    } else if (*metrics) {
      analysis::MetricsReport m;
      if (!an_in.empty()) {
        const auto truth = analysis::load_ground_truth(an_in);
        m = analysis::metrics_from_ground_truth(truth, reported);
      } else {
        if (helpful < 0 || truth_size < 0) {
          throw Error(ErrorCode::InvalidArgument, "pass --helpful and --ground-truth, or --in");
        }
        m = analysis::precision_recall_f1(reported, helpful, truth_size);
      }
      write_output(an_out, analysis::metrics_to_json(m));
    } else if (*kappa) {
      std::vector<std::vector<long>> table;
      if (!table_path.empty()) {
        table = ordered_json::parse(read_file(table_path)).get<std::vector<std::vector<long>>>();
      } else if (!an_in.empty()) {
        table = analysis::kappa_table(analysis::load_ratings(an_in),
                                      analysis::dimension_from_string(dimension));
      } else {
        throw Error(ErrorCode::InvalidArgument, "pass --in or --table");
      }
      if (raters == 0 && !table.empty()) {
        for (long c : table.front()) raters += c;
      }
      const auto k = analysis::fleiss_kappa(table, raters);
      ordered_json out{{"items", table.size()},
                       {"raters", raters},
                       {"kappa", k ? ordered_json(*k) : ordered_json(nullptr)}};
      write_output(an_out, out.dump(2));
    } else if (*ratings) {
      const auto d = analysis::rating_distribution(analysis::load_ratings(an_in),
                                                   analysis::dimension_from_string(dimension));
      write_output(an_out, analysis::distribution_to_json(d));
    } else if (*words) {
      std::vector<std::string> stop = analysis::default_stopwords();
      if (!stopwords_path.empty()) {
        stop.clear();
        std::istringstream in(read_file(stopwords_path));
        for (std::string w; std::getline(in, w);) {
          if (!w.empty() && w[0] != '#') stop.push_back(w);
        }
      }
      auto drop = no_default_drop ? std::vector<std::string>{} : analysis::default_drop_words();
      drop.insert(drop.end(), drop_words.begin(), drop_words.end());
      const auto r = analysis::word_count_analysis(analysis::load_ratings(an_in), top_k, stop, drop);
      write_output(an_out, analysis::word_counts_to_json(r));
    }
  } catch (const Error& e) {
    return fail(e);
  } catch (const nlohmann::json::exception& e) {
    return fail(Error(ErrorCode::MalformedJson, e.what()));
  } catch (const std::exception& e) {
    std::cerr << ordered_json{{"error", "InternalError"}, {"message", e.what()}}.dump() << std::endl;
    return 1;
  }
  return 0;
}
