#pragma once

// End-to-end analysis: ingest -> indices -> match -> stratify -> regress ->
// profile, rendered into an in-memory bundle of report files. A run manifest
// records every parameter and input digest, and a manifest alone is enough
// to reproduce a run.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "spanrel/bootstrap.hpp"
#include "spanrel/corpus.hpp"
#include "spanrel/indices.hpp"
#include "spanrel/lexicon.hpp"
#include "spanrel/matching.hpp"
#include "spanrel/regression.hpp"
#include "spanrel/report.hpp"
#include "spanrel/stratification.hpp"

namespace spanrel {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct LexiconPaths {
  std::string stopwords;  // empty = built-in
  std::string hedges;
  std::string negations;
  std::string pronouns;
};

struct RunConfig {
  std::string documents;
  std::string gold;
  std::string predictions;
  std::string output_dir;  // not part of the manifest
  std::vector<MatchKind> criteria{MatchKind::Exact, MatchKind::IoU};
  double iou_threshold = 0.5;
  std::size_t target_bins = 5;
  BootstrapConfig bootstrap;  // workers is not part of the manifest
  double lambda = 1e-4;
  bool zscore_binary = true;
  std::string group_by = "category";  // or "meta:<key>"
  std::string split;                  // keep only documents with meta split == value
  std::string zscore_population = "analysis";  // or "all"
  LexiconPaths lexicons;

  MatchCriterion criterion(MatchKind kind) const {
    return kind == MatchKind::Exact ? MatchCriterion::exact() : MatchCriterion::iou(iou_threshold);
  }

  void validate() const {
    if (documents.empty() || gold.empty()) throw ValidationError("documents and gold paths are required");
    std::vector<std::string> paths{documents, gold};
    if (!predictions.empty()) paths.push_back(predictions);
    if (!output_dir.empty()) paths.push_back(output_dir);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        if (paths[i] == paths[j]) throw ValidationError("input/output paths must be distinct: " + paths[i]);
      }
    }
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) throw ValidationError("iou threshold must lie in (0, 1]");
    if (target_bins < 2) throw ValidationError("target bins must be >= 2");
    if (bootstrap.replicates < 1) throw ValidationError("bootstrap replicates must be >= 1");
    if (!(bootstrap.ci_level > 0.0 && bootstrap.ci_level < 1.0)) throw ValidationError("ci level must lie in (0, 1)");
    if (lambda < 0.0) throw ValidationError("ridge lambda must be >= 0");
    if (group_by != "category" && (group_by.rfind("meta:", 0) != 0 || group_by.size() <= 5)) {
      throw ValidationError("group-by must be \"category\" or \"meta:<key>\"");
    }
    if (zscore_population != "analysis" && zscore_population != "all") {
      throw ValidationError("zscore population must be \"analysis\" or \"all\"");
    }
    if (criteria.empty()) throw ValidationError("at least one match criterion required");
  }
};

// ---------------------------------------------------------------------------
// Manifest

/// 64-bit FNV-1a digest of a file's bytes, as 16 hex digits.
inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

inline nlohmann::json to_manifest(const RunConfig& c) {
  using nlohmann::json;
  json inputs{{"documents", c.documents}, {"gold", c.gold}, {"predictions", c.predictions}};
  json digests{{"documents", file_digest(c.documents)}, {"gold", file_digest(c.gold)}};
  if (!c.predictions.empty()) digests["predictions"] = file_digest(c.predictions);
  json lex = json::object();
  auto lexicon_entry = [&](const char* name, const std::string& path) {
    lex[name] = path.empty() ? json("builtin") : json{{"path", path}, {"digest", file_digest(path)}};
  };
  lexicon_entry("stopwords", c.lexicons.stopwords);
  lexicon_entry("hedges", c.lexicons.hedges);
  lexicon_entry("negations", c.lexicons.negations);
  lexicon_entry("pronouns", c.lexicons.pronouns);
  json criteria = json::array();
  for (MatchKind k : c.criteria) criteria.push_back(c.criterion(k).name());
  return json{
      {"tool", "spanrel"},
      {"version", kToolVersion},
      {"inputs", inputs},
      {"input_digests", digests},
      {"lexicons", lex},
      {"criteria", criteria},
      {"iou_threshold", c.iou_threshold},
      {"target_bins", c.target_bins},
      {"quantile_method", "nearest-rank"},
      {"bootstrap",
       {{"replicates", c.bootstrap.replicates},
        {"seed", c.bootstrap.seed},
        {"ci_level", c.bootstrap.ci_level},
        {"interval", "percentile"},
        {"cluster", "document"}}},
      {"regression",
       {{"lambda", c.lambda},
        {"zscore_binary", c.zscore_binary},
        {"reference_category", "most frequent"}}},
      {"group_by", c.group_by},
      {"split", c.split},
      {"zscore_population", c.zscore_population},
  };
}

/// Rebuilds a config from a manifest and checks that every input still has
/// the recorded digest.
inline RunConfig from_manifest(const nlohmann::json& m) {
  try {
    RunConfig c;
    c.documents = m.at("inputs").at("documents").get<std::string>();
    c.gold = m.at("inputs").at("gold").get<std::string>();
    c.predictions = m.at("inputs").at("predictions").get<std::string>();
    c.criteria.clear();
    for (const auto& name : m.at("criteria")) {
      const auto s = name.get<std::string>();
      if (s == "exact") {
        c.criteria.push_back(MatchKind::Exact);
      } else if (s == "iou") {
        c.criteria.push_back(MatchKind::IoU);
      } else {
        throw ValidationError("manifest: unknown criterion " + s);
      }
    }
    c.iou_threshold = m.at("iou_threshold").get<double>();
    c.target_bins = m.at("target_bins").get<std::size_t>();
    c.bootstrap.replicates = m.at("bootstrap").at("replicates").get<std::size_t>();
    c.bootstrap.seed = m.at("bootstrap").at("seed").get<std::uint64_t>();
    c.bootstrap.ci_level = m.at("bootstrap").at("ci_level").get<double>();
    c.lambda = m.at("regression").at("lambda").get<double>();
    c.zscore_binary = m.at("regression").at("zscore_binary").get<bool>();
    c.group_by = m.at("group_by").get<std::string>();
    c.split = m.at("split").get<std::string>();
    c.zscore_population = m.at("zscore_population").get<std::string>();
    auto lexicon_path = [&](const char* name) -> std::string {
      const auto& e = m.at("lexicons").at(name);
      if (e.is_string()) return {};
      const auto path = e.at("path").get<std::string>();
      if (file_digest(path) != e.at("digest").get<std::string>()) {
        throw ValidationError("manifest: lexicon " + path + " changed since the recorded run");
      }
      return path;
    };
    c.lexicons = {lexicon_path("stopwords"), lexicon_path("hedges"), lexicon_path("negations"),
                  lexicon_path("pronouns")};
    const auto& digests = m.at("input_digests");
    auto check = [&](const char* key, const std::string& path) {
      if (path.empty()) return;
      if (file_digest(path) != digests.at(key).get<std::string>()) {
        throw ValidationError("manifest: input " + path + " changed since the recorded run");
      }
    };
    check("documents", c.documents);
    check("gold", c.gold);
    check("predictions", c.predictions);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Stages

/// Runs `fn`, prefixing any error with the stage name. Argument errors are
/// reported as validation errors.
template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(name) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw ComputationError(std::string(name) + ": " + e.what());
  }
}

inline LexiconBundle load_lexicons(const LexiconPaths& paths) {
  LexiconBundle lex = LexiconBundle::builtin();
  if (!paths.stopwords.empty()) lex.stopwords = StopwordSet(read_lexicon_file(paths.stopwords));
  if (!paths.hedges.empty()) lex.hedges = CueLexicon(read_lexicon_file(paths.hedges));
  if (!paths.negations.empty()) lex.negations = CueLexicon(read_lexicon_file(paths.negations));
  if (!paths.pronouns.empty()) lex.pronouns = PronounSet(read_lexicon_file(paths.pronouns));
  return lex;
}

/// Keeps documents whose meta "split" equals `split` (all when empty), with
/// their spans.
inline Corpus restrict_to_split(const Corpus& full, const std::string& split) {
  if (split.empty()) return full;
  std::vector<Document> docs;
  std::unordered_set<std::string> keep;
  for (const auto& d : full.documents()) {
    auto it = d.meta.find("split");
    if (it != d.meta.end() && it->second == split) {
      docs.push_back(d);
      keep.insert(d.doc_id);
    }
  }
  std::vector<GoldSpan> gold;
  for (const auto& g : full.gold()) {
    if (keep.count(g.doc_id)) gold.push_back(g);
  }
  std::vector<PredictedSpan> pred;
  for (const auto& p : full.predicted()) {
    if (keep.count(p.doc_id)) pred.push_back(p);
  }
  return Corpus(std::move(docs), std::move(gold), std::move(pred));
}

inline std::vector<IndexVector> compute_gold_vectors(const Corpus& corpus, const LexiconBundle& lex) {
  std::vector<IndexVector> out;
  out.reserve(corpus.gold().size());
  for (const auto& g : corpus.gold()) out.push_back(compute_index_vector(g.text, lex));
  return out;
}

/// Loaded inputs plus the per-span quantities every report needs.
class Analysis {
 public:
  explicit Analysis(RunConfig config) : config_(std::move(config)) {
    stage("config", [&] {
      config_.validate();
      return 0;
    });
    full_ = stage("ingest", [&] {
      return load_corpus(config_.documents, config_.gold, config_.predictions);
    });
    corpus_ = stage("ingest", [&] { return restrict_to_split(full_, config_.split); });
    if (!config_.split.empty() && corpus_.documents().empty()) {
      throw ValidationError("ingest: no documents with split \"" + config_.split + "\"");
    }
    lexicons_ = stage("lexicons", [&] { return load_lexicons(config_.lexicons); });
    if (auto outside = lexicons_.pronouns_outside_stopwords(); !outside.empty()) {
      std::string list;
      for (const auto& p : outside) list += (list.empty() ? "" : ", ") + p;
      warnings_.push_back("pronouns outside the stopword set (" + list +
                          "): prop_pronouns may exceed prop_stopwords");
    }
    vectors_ = stage("indices", [&] { return compute_gold_vectors(corpus_, lexicons_); });
    std::size_t undefined = 0;
    for (const auto& v : vectors_) undefined += v.defined() ? 0 : 1;
    if (undefined) {
      warnings_.push_back(std::to_string(undefined) + " gold spans have no word tokens; excluded from index strata");
    }
  }

  const RunConfig& config() const { return config_; }
  const Corpus& corpus() const { return corpus_; }
  const Corpus& full_corpus() const { return full_; }
  const LexiconBundle& lexicons() const { return lexicons_; }
  const std::vector<IndexVector>& vectors() const { return vectors_; }
  Warnings& warnings() { return warnings_; }
  const Warnings& warnings() const { return warnings_; }

  /// Outcomes sorted by span_id.
  const std::vector<MatchOutcome>& outcomes(MatchKind kind) {
    auto it = outcomes_.find(kind);
    if (it != outcomes_.end()) return it->second;
    if (!tokens_) tokens_ = std::make_unique<DocumentTokens>(corpus_);
    auto list = stage("match", [&] { return evaluate_matches(corpus_, config_.criterion(kind), *tokens_); });
    std::size_t uncovered = 0;
    for (const auto& o : list) uncovered += o.no_token_coverage ? 1 : 0;
    if (uncovered && kind == config_.criteria.front()) {
      warnings_.push_back(std::to_string(uncovered) + " gold spans cover no token; counted unmatched");
    }
    return outcomes_.emplace(kind, std::move(list)).first->second;
  }

  /// Index vector for each outcome (outcomes are sorted by span_id).
  std::vector<const IndexVector*> vectors_for(const std::vector<MatchOutcome>& outcomes) const {
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < corpus_.gold().size(); ++i) pos.emplace(corpus_.gold()[i].span_id, i);
    std::vector<const IndexVector*> out;
    out.reserve(outcomes.size());
    for (const auto& o : outcomes) out.push_back(&vectors_[pos.at(o.span_id)]);
    return out;
  }

 private:
  RunConfig config_;
  Corpus full_;
  Corpus corpus_;
  LexiconBundle lexicons_;
  std::vector<IndexVector> vectors_;
  std::map<MatchKind, std::vector<MatchOutcome>> outcomes_;
  std::unique_ptr<DocumentTokens> tokens_;
  Warnings warnings_;
};

/// Category strata (every gold span) followed by an overall row.
inline std::vector<report::LabeledStrata> category_recall(Analysis& a, MatchKind kind) {
  const auto& outcomes = a.outcomes(kind);
  const std::string name = a.config().criterion(kind).name();
  return stage("stratify", [&] {
    Strata by_category;
    for (DecisionCategory c : kAllCategories) by_category.labels.emplace_back(category_label(c));
    for (const auto& o : outcomes) by_category.stratum.push_back(category_index(o.category));
    Warnings local;
    auto reports = stratified_recall(outcomes, by_category, a.corpus(), a.config().bootstrap, &local);

    Strata overall{{"Overall"}, std::vector<std::optional<std::size_t>>(outcomes.size(), 0)};
    auto total = stratified_recall(outcomes, overall, a.corpus(), a.config().bootstrap, &a.warnings());
    reports.insert(reports.end(), total.begin(), total.end());
    for (auto& w : local) {
      // Empty categories are routine; only resampling instability is worth a warning.
      if (w.find("unstable") != std::string::npos) a.warnings().push_back(name + ": " + w);
    }
    return std::vector<report::LabeledStrata>{{name, "", nullptr, std::move(reports)}};
  });
}

/// Quantile bins for the continuous indices and 0/1 counts for the binary
/// ones, over the defined spans of the analysis set.
inline std::vector<report::NamedBins> index_bins(Analysis& a) {
  return stage("stratify", [&] {
    std::vector<report::NamedBins> out;
    for (Index idx : kAllIndices) {
      report::NamedBins b;
      b.index = std::string(index_key(idx));
      std::vector<double> values;
      for (const auto& v : a.vectors()) {
        if (v.defined()) values.push_back(v.value(idx));
      }
      if (is_binary(idx)) {
        b.binary = true;
        for (double x : values) (x > 0.5 ? b.ones : b.zeros) += 1;
      } else {
        if (values.size() < a.config().target_bins) {
          a.warnings().push_back("index " + b.index + ": fewer defined spans than target bins; not binned");
          continue;
        }
        Warnings local;
        b.spec = quantile_bins(values, a.config().target_bins, &local);
        b.spec.index_name = b.index;
        for (auto& w : local) a.warnings().push_back("index " + b.index + ": " + w);
      }
      out.push_back(std::move(b));
    }
    return out;
  });
}

inline std::vector<report::LabeledStrata> index_recall(Analysis& a, MatchKind kind,
                                                       const std::vector<report::NamedBins>& bins) {
  const auto& outcomes = a.outcomes(kind);
  const auto vecs = a.vectors_for(outcomes);
  const std::string name = a.config().criterion(kind).name();
  return stage("stratify", [&] {
    std::vector<report::LabeledStrata> out;
    for (const auto& b : bins) {
      const Index idx = *parse_index(b.index);
      Strata s;
      if (b.binary) {
        s.labels = {"0", "1"};
      } else {
        for (std::size_t i = 0; i < b.spec.bins.size(); ++i) s.labels.push_back(std::to_string(i));
      }
      for (const IndexVector* v : vecs) {
        if (!v->defined()) {
          s.stratum.push_back(std::nullopt);
        } else if (b.binary) {
          s.stratum.push_back(v->value(idx) > 0.5 ? 1 : 0);
        } else {
          s.stratum.push_back(b.spec.assign(v->value(idx)));
        }
      }
      Warnings local;
      auto reports = stratified_recall(outcomes, s, a.corpus(), a.config().bootstrap, &local);
      for (auto& w : local) a.warnings().push_back(name + " " + b.index + ": " + w);
      out.push_back({name, b.index, b.binary ? nullptr : &b.spec, std::move(reports)});
    }
    return out;
  });
}

/// Empty when every outcome agrees: the intercept then has no finite
/// estimate, so the fit is skipped with a warning.
inline std::optional<RegressionResult> regression(Analysis& a, MatchKind kind) {
  const auto& outcomes = a.outcomes(kind);
  const std::string name = a.config().criterion(kind).name();
  const bool constant = std::all_of(outcomes.begin(), outcomes.end(),
                                    [&](const MatchOutcome& o) { return o.is_matched == outcomes.front().is_matched; });
  if (constant) {
    a.warnings().push_back(name + " regression skipped: match outcome is constant");
    return std::nullopt;
  }
  return stage("regress", [&] {
    RegressionOptions options;
    options.lambda = a.config().lambda;
    options.zscore_binary = a.config().zscore_binary;
    options.bootstrap = a.config().bootstrap;
    Warnings local;
    auto result = regress_matching(a.corpus(), outcomes, a.vectors(), options, &local);
    for (auto& w : local) a.warnings().push_back(name + " regression: " + w);
    return result;
  });
}

inline ProfileMatrix profile(Analysis& a) {
  return stage("profile", [&] {
    const RunConfig& c = a.config();
    const Corpus& corpus = a.corpus();
    std::vector<std::string> labels;
    std::vector<std::optional<std::size_t>> group;
    if (c.group_by == "category") {
      for (DecisionCategory cat : kAllCategories) labels.emplace_back(category_label(cat));
      for (const auto& g : corpus.gold()) group.push_back(category_index(g.category));
    } else {
      const std::string key = c.group_by.substr(5);
      std::vector<std::string> per_span;
      std::set<std::string> distinct;
      for (const auto& g : corpus.gold()) {
        const auto& meta = corpus.document(g.doc_id).meta;
        auto it = meta.find(key);
        per_span.push_back(it == meta.end() ? "(missing)" : it->second);
        distinct.insert(per_span.back());
      }
      labels.assign(distinct.begin(), distinct.end());
      for (const auto& s : per_span) {
        group.push_back(static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), s) - labels.begin()));
      }
    }
    IndexZParams z;
    if (c.zscore_population == "all") {
      auto all_vectors = compute_gold_vectors(a.full_corpus(), a.lexicons());
      std::vector<std::size_t> rows(all_vectors.size());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      z = fit_index_zscores(all_vectors, rows);
    } else {
      std::vector<std::size_t> rows(a.vectors().size());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      z = fit_index_zscores(a.vectors(), rows);
    }
    Warnings local;
    auto m = group_profile(a.vectors(), group, labels, z, &local);
    for (auto& w : local) a.warnings().push_back("profile: " + w);
    return m;
  });
}

// ---------------------------------------------------------------------------
// Bundle

/// File name -> contents.
using ReportBundle = std::map<std::string, std::string>;

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline ReportBundle run_pipeline(const RunConfig& config) {
  Analysis a(config);
  const RunConfig& c = a.config();
  ReportBundle files;

  std::vector<std::vector<MatchOutcome>> per_criterion;
  for (MatchKind k : c.criteria) per_criterion.push_back(a.outcomes(k));
  files["spans.csv"] = report::span_table(a.corpus(), a.vectors(), per_criterion);

  std::vector<report::LabeledStrata> categories;
  for (MatchKind k : c.criteria) {
    auto t = category_recall(a, k);
    categories.insert(categories.end(), t.begin(), t.end());
  }
  files["category_recall.csv"] = report::category_recall_table(categories);

  const auto bins = index_bins(a);
  files["bins.csv"] = report::bin_table(bins);
  std::vector<report::LabeledStrata> strata;
  for (MatchKind k : c.criteria) {
    auto t = index_recall(a, k, bins);
    strata.insert(strata.end(), t.begin(), t.end());
  }
  files["stratified_recall.csv"] = report::stratified_table(strata);

  std::vector<std::pair<std::string, RegressionResult>> fits;
  std::vector<std::string> skipped;
  for (MatchKind k : c.criteria) {
    auto fit = regression(a, k);
    if (fit) {
      fits.emplace_back(c.criterion(k).name(), std::move(*fit));
    } else {
      skipped.push_back(c.criterion(k).name());
    }
  }
  files["regression.csv"] = report::regression_table(fits);

  files["profile.csv"] = report::profile_table(profile(a));

  using nlohmann::json;
  json summary;
  summary["n_documents"] = a.corpus().documents().size();
  summary["n_gold"] = a.corpus().gold().size();
  summary["n_predicted"] = a.corpus().predicted().size();
  std::size_t undefined = 0;
  for (const auto& v : a.vectors()) undefined += v.defined() ? 0 : 1;
  summary["n_undefined_indices"] = undefined;
  for (std::size_t i = 0; i < c.criteria.size(); ++i) {
    const auto& outcomes = per_criterion[i];
    const std::string name = c.criterion(c.criteria[i]).name();
    std::size_t matched = 0;
    std::array<std::size_t, kCategoryCount> n{};
    std::array<std::size_t, kCategoryCount> hits{};
    for (const auto& o : outcomes) {
      matched += static_cast<std::size_t>(o.is_matched);
      ++n[category_index(o.category)];
      hits[category_index(o.category)] += static_cast<std::size_t>(o.is_matched);
    }
    summary["overall"][name] = {{"n", outcomes.size()},
                                {"matched", matched},
                                {"recall", recall(outcomes)}};
    json cats = json::array();
    for (DecisionCategory cat : kAllCategories) {
      const std::size_t k = category_index(cat);
      if (n[k] == 0) continue;
      cats.push_back({{"category", category_label(cat)},
                      {"n", n[k]},
                      {"matched", hits[k]},
                      {"recall", static_cast<double>(hits[k]) / static_cast<double>(n[k])}});
    }
    summary["categories"][name] = cats;
  }
  for (const auto& [name, fit] : fits) {
    summary["regression"][name] = {{"n", fit.n},
                                   {"iterations", fit.iterations},
                                   {"converged", fit.converged},
                                   {"lambda", fit.lambda},
                                   {"reference_category", category_label(fit.reference)},
                                   {"interval", fit.ci_method}};
  }
  for (const auto& name : skipped) summary["regression"][name] = {{"skipped", "constant outcome"}};
  summary["warnings"] = a.warnings();
  files["summary.json"] = dump_json(summary);
  files["manifest.json"] = dump_json(to_manifest(c));
  return files;
}

/// Writes every file of the bundle into `dir`. On failure, files written by
/// this call are removed before the error propagates.
inline void write_bundle(const ReportBundle& files, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ComputationError("cannot create output directory " + dir + ": " + ec.message());
  std::vector<fs::path> written;
  try {
    for (const auto& [name, content] : files) {
      const fs::path target = fs::path(dir) / name;
      const fs::path tmp = fs::path(dir) / (name + ".tmp");
      {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ComputationError("cannot write " + tmp.string());
        written.push_back(tmp);
        out << content;
        if (!out) throw ComputationError("write failed for " + tmp.string());
      }
      fs::rename(tmp, target);
      written.back() = target;
    }
  } catch (...) {
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
}

}  // namespace spanrel
