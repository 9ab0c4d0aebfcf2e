// spanrel command-line tool. Exit codes: 0 success, 1 validation error,
// 2 runtime error. Diagnostics go to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "spanrel/pipeline.hpp"
#include "spanrel/synth.hpp"

namespace {

using namespace spanrel;

struct Options {
  RunConfig run;
  std::string criterion = "both";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool raw_binary = false;
  std::string manifest;
  synth::CorpusShape shape;
  synth::ExtractorSim sim{0.1, 0.8, 0.3, 2, 0.0, 0.0};
};

void add_inputs(CLI::App* cmd, Options& o, bool predictions_required) {
  cmd->add_option("--documents", o.run.documents, "documents JSONL")->required();
  cmd->add_option("--gold", o.run.gold, "gold spans JSONL")->required();
  auto* p = cmd->add_option("--predictions", o.run.predictions, "predicted spans JSONL");
  if (predictions_required) p->required();
  cmd->add_option("--split", o.run.split, "keep documents whose meta.split equals this value");
  cmd->add_option("--stopwords", o.run.lexicons.stopwords, "stopword list (one per line)");
  cmd->add_option("--hedges", o.run.lexicons.hedges, "hedge cue list");
  cmd->add_option("--negations", o.run.lexicons.negations, "negation cue list");
  cmd->add_option("--pronouns", o.run.lexicons.pronouns, "pronoun list");
}

void add_out(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.run.output_dir, "output directory")->required();
}

void add_criterion(CLI::App* cmd, Options& o) {
  cmd->add_option("--criterion", o.criterion, "exact, iou or both")
      ->check(CLI::IsMember({"exact", "iou", "both"}))
      ->capture_default_str();
  cmd->add_option("--iou-threshold", o.run.iou_threshold, "token IoU threshold")->capture_default_str();
}

void add_bootstrap(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "bootstrap seed")->required();
  cmd->add_option("--replicates", o.run.bootstrap.replicates, "bootstrap replicates")->capture_default_str();
  cmd->add_option("--ci-level", o.run.bootstrap.ci_level, "confidence level")->capture_default_str();
  cmd->add_option("--threads", o.threads, "worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);
}

void add_bins(CLI::App* cmd, Options& o) {
  cmd->add_option("--bins", o.run.target_bins, "target quantile bins")->capture_default_str();
}

void add_regression(CLI::App* cmd, Options& o) {
  cmd->add_option("--lambda", o.run.lambda, "ridge penalty")->capture_default_str();
  cmd->add_flag("--raw-binary", o.raw_binary, "enter hedge/negation as raw 0/1");
}

void add_profile(CLI::App* cmd, Options& o) {
  cmd->add_option("--group-by", o.run.group_by, "category or meta:<key>")->capture_default_str();
  cmd->add_option("--zscore-population", o.run.zscore_population, "analysis or all")
      ->check(CLI::IsMember({"analysis", "all"}))
      ->capture_default_str();
}

void finish(Options& o) {
  if (o.criterion == "exact") o.run.criteria = {MatchKind::Exact};
  if (o.criterion == "iou") o.run.criteria = {MatchKind::IoU};
  if (o.seed) o.run.bootstrap.seed = *o.seed;
  o.run.bootstrap.workers = o.threads;
  o.run.zscore_binary = !o.raw_binary;
}

void print_warnings(const Warnings& w) {
  for (const auto& m : w) std::cerr << "warning: " << m << "\n";
}

std::string concat_outcomes(Analysis& a) {
  std::vector<MatchOutcome> all;
  for (MatchKind k : a.config().criteria) {
    const auto& o = a.outcomes(k);
    all.insert(all.end(), o.begin(), o.end());
  }
  return report::outcome_table(all);
}

int cmd_ingest_check(const Options& o) {
  RunConfig c = o.run;
  Analysis a(c);
  std::cout << "documents " << a.corpus().documents().size() << "\n"
            << "gold_spans " << a.corpus().gold().size() << "\n"
            << "predicted_spans " << a.corpus().predicted().size() << "\n";
  print_warnings(a.warnings());
  return 0;
}

int cmd_indices(const Options& o) {
  Analysis a(o.run);
  ReportBundle b{{"indices.csv", report::span_table(a.corpus(), a.vectors(), {})}};
  write_bundle(b, o.run.output_dir);
  print_warnings(a.warnings());
  return 0;
}

int cmd_match(const Options& o) {
  Analysis a(o.run);
  ReportBundle b{{"outcomes.csv", concat_outcomes(a)}};
  write_bundle(b, o.run.output_dir);
  print_warnings(a.warnings());
  return 0;
}

int cmd_stratify(const Options& o) {
  Analysis a(o.run);
  std::vector<report::LabeledStrata> categories;
  for (MatchKind k : o.run.criteria) {
    auto t = category_recall(a, k);
    categories.insert(categories.end(), t.begin(), t.end());
  }
  const auto bins = index_bins(a);
  std::vector<report::LabeledStrata> strata;
  for (MatchKind k : o.run.criteria) {
    auto t = index_recall(a, k, bins);
    strata.insert(strata.end(), t.begin(), t.end());
  }
  ReportBundle b{{"category_recall.csv", report::category_recall_table(categories)},
                 {"bins.csv", report::bin_table(bins)},
                 {"stratified_recall.csv", report::stratified_table(strata)}};
  write_bundle(b, o.run.output_dir);
  print_warnings(a.warnings());
  return 0;
}

int cmd_regress(const Options& o) {
  Analysis a(o.run);
  std::vector<std::pair<std::string, RegressionResult>> fits;
  for (MatchKind k : o.run.criteria) {
    if (auto fit = regression(a, k)) fits.emplace_back(o.run.criterion(k).name(), std::move(*fit));
  }
  write_bundle({{"regression.csv", report::regression_table(fits)}}, o.run.output_dir);
  print_warnings(a.warnings());
  return 0;
}

int cmd_profile(const Options& o) {
  Analysis a(o.run);
  write_bundle({{"profile.csv", report::profile_table(profile(a))}}, o.run.output_dir);
  print_warnings(a.warnings());
  return 0;
}

int cmd_simulate(const Options& o) {
  const auto profiles = synth::default_profiles();
  const Corpus gold = stage("simulate", [&] { return synth::generate_corpus(profiles, o.shape, *o.seed); });
  const auto preds = stage("simulate", [&] {
    return synth::simulate_predictions(gold, o.sim, derive_seed(*o.seed, 1));
  });
  std::ostringstream docs, g, p;
  write_documents(docs, gold.documents());
  write_gold_spans(g, gold.gold());
  write_predicted_spans(p, preds);
  write_bundle({{"documents.jsonl", docs.str()}, {"gold.jsonl", g.str()}, {"predictions.jsonl", p.str()}},
               o.run.output_dir);
  return 0;
}

int cmd_run_all(Options& o) {
  RunConfig c = o.run;
  if (!o.manifest.empty()) {
    std::ifstream in(o.manifest);
    if (!in) throw ValidationError("cannot open manifest " + o.manifest);
    nlohmann::json m;
    try {
      in >> m;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("malformed manifest: " + std::string(e.what()));
    }
    c = from_manifest(m);
    c.output_dir = o.run.output_dir;
    c.bootstrap.workers = o.threads;
  } else {
    if (c.documents.empty() || c.gold.empty() || c.predictions.empty()) {
      throw ValidationError("run-all needs --documents, --gold and --predictions, or --manifest");
    }
    if (!o.seed) throw ValidationError("run-all needs --seed (or --manifest)");
  }
  const ReportBundle bundle = run_pipeline(c);
  write_bundle(bundle, c.output_dir);
  const auto summary = nlohmann::json::parse(bundle.at("summary.json"));
  for (const auto& w : summary.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Span-level reliability diagnostics for decision extraction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(spanrel::kToolVersion));
  Options o;

  auto* ingest = app.add_subcommand("ingest-check", "validate input files");
  add_inputs(ingest, o, false);

  auto* indices = app.add_subcommand("indices", "linguistic indices per gold span");
  add_inputs(indices, o, false);
  add_out(indices, o);

  auto* match = app.add_subcommand("match", "match outcomes per gold span");
  add_inputs(match, o, true);
  add_criterion(match, o);
  add_out(match, o);

  auto* stratify = app.add_subcommand("stratify", "recall by category and index bins");
  add_inputs(stratify, o, true);
  add_criterion(stratify, o);
  add_bins(stratify, o);
  add_bootstrap(stratify, o);
  add_out(stratify, o);

  auto* regress = app.add_subcommand("regress", "category-controlled logistic regression");
  add_inputs(regress, o, true);
  add_criterion(regress, o);
  add_regression(regress, o);
  add_bootstrap(regress, o);
  add_out(regress, o);

  auto* prof = app.add_subcommand("profile", "z-scored index means per group");
  add_inputs(prof, o, false);
  add_profile(prof, o);
  add_out(prof, o);

  auto* simulate = app.add_subcommand("simulate", "write a synthetic corpus and extractor output");
  simulate->add_option("--seed", o.seed, "generator seed")->required();
  simulate->add_option("--docs", o.shape.n_docs, "documents")->capture_default_str();
  simulate->add_option("--min-spans", o.shape.min_spans_per_doc, "min spans per document")->capture_default_str();
  simulate->add_option("--max-spans", o.shape.max_spans_per_doc, "max spans per document")->capture_default_str();
  simulate->add_option("--base-miss", o.sim.base_miss, "base miss probability")->capture_default_str();
  simulate->add_option("--stopword-slope", o.sim.stopword_slope, "miss slope vs prop_stopwords")
      ->capture_default_str();
  simulate->add_option("--jitter-probability", o.sim.jitter_probability, "per-boundary jitter probability")
      ->capture_default_str();
  simulate->add_option("--max-jitter", o.sim.max_jitter, "max boundary shift in tokens")->capture_default_str();
  simulate->add_option("--confusion", o.sim.confusion_probability, "category confusion probability")
      ->capture_default_str();
  simulate->add_option("--document-spread", o.sim.document_miss_spread, "per-document miss shift range")
      ->capture_default_str();
  add_out(simulate, o);

  auto* run_all = app.add_subcommand("run-all", "full analysis bundle");
  run_all->add_option("--documents", o.run.documents, "documents JSONL");
  run_all->add_option("--gold", o.run.gold, "gold spans JSONL");
  run_all->add_option("--predictions", o.run.predictions, "predicted spans JSONL");
  run_all->add_option("--split", o.run.split, "keep documents whose meta.split equals this value");
  run_all->add_option("--stopwords", o.run.lexicons.stopwords, "stopword list");
  run_all->add_option("--hedges", o.run.lexicons.hedges, "hedge cue list");
  run_all->add_option("--negations", o.run.lexicons.negations, "negation cue list");
  run_all->add_option("--pronouns", o.run.lexicons.pronouns, "pronoun list");
  add_criterion(run_all, o);
  add_bins(run_all, o);
  run_all->add_option("--seed", o.seed, "bootstrap seed");
  run_all->add_option("--replicates", o.run.bootstrap.replicates, "bootstrap replicates")->capture_default_str();
  run_all->add_option("--ci-level", o.run.bootstrap.ci_level, "confidence level")->capture_default_str();
  run_all->add_option("--threads", o.threads, "worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);
  add_regression(run_all, o);
  add_profile(run_all, o);
  auto* manifest = run_all->add_option("--manifest", o.manifest, "rerun from a manifest");
  for (auto* opt : run_all->get_options()) {
    const auto& name = opt->get_name();
    if (opt != manifest && name != "--threads" && name != "--help" && name != "--out") manifest->excludes(opt);
  }
  add_out(run_all, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  finish(o);

  try {
    if (*ingest) return cmd_ingest_check(o);
    if (*indices) return cmd_indices(o);
    if (*match) return cmd_match(o);
    if (*stratify) return cmd_stratify(o);
    if (*regress) return cmd_regress(o);
    if (*prof) return cmd_profile(o);
    if (*simulate) return cmd_simulate(o);
    if (*run_all) return cmd_run_all(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
