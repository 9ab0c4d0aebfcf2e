#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "spanrel/bootstrap.hpp"
#include "spanrel/corpus.hpp"
#include "spanrel/error.hpp"
#include "spanrel/indices.hpp"
#include "spanrel/matching.hpp"

namespace spanrel {

using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

// ---------------------------------------------------------------------------
// z-scores

/// Population mean and standard deviation of a fitting sample.
struct ZScoreParams {
  double mean = 0.0;
  double sd = 0.0;

  bool constant() const { return !(sd > 0.0); }
  double operator()(double x) const { return (x - mean) / sd; }
};

inline ZScoreParams fit_zscore(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("zscore needs at least two values");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

struct ZScoreResult {
  ZScoreParams params;
  std::vector<double> z;  // empty when params.constant()
};

/// Centers and scales; a constant input returns params with sd == 0 and no z.
inline ZScoreResult zscore(const std::vector<double>& values) {
  ZScoreResult out{fit_zscore(values), {}};
  if (out.params.constant()) return out;
  out.z.reserve(values.size());
  for (double v : values) out.z.push_back(out.params(v));
  return out;
}

using IndexZParams = std::array<ZScoreParams, kIndexCount>;

/// z-parameters for every index over the defined vectors among `rows`.
inline IndexZParams fit_index_zscores(const std::vector<IndexVector>& vectors,
                                      const std::vector<std::size_t>& rows) {
  IndexZParams out{};
  for (Index idx : kAllIndices) {
    std::vector<double> values;
    for (std::size_t r : rows) {
      if (vectors[r].defined()) values.push_back(vectors[r].value(idx));
    }
    out[index_position(idx)] = fit_zscore(values);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantile bins

struct Bin {
  double min = 0.0;  // observed range
  double max = 0.0;
  std::size_t count = 0;
};

/// Nearest-rank quantile bins. Bin i holds values in (cut[i-1], cut[i]];
/// the first bin is unbounded below and the last (cuts.size()) unbounded
/// above. Empty bins are dropped, so bins.size() may be below the target.
struct BinSpec {
  std::string index_name;
  std::size_t target_bins = 0;
  std::vector<double> cuts;
  std::vector<Bin> bins;
  bool single_bin = false;

  std::size_t assign(double value) const {
    auto it = std::lower_bound(cuts.begin(), cuts.end(), value);
    return std::min(static_cast<std::size_t>(it - cuts.begin()), bins.size() - 1);
  }
};

inline BinSpec quantile_bins(const std::vector<double>& values, std::size_t target_bins,
                             Warnings* warnings = nullptr) {
  if (target_bins < 2) throw std::invalid_argument("target_bins must be >= 2");
  if (values.size() < target_bins) {
    throw std::invalid_argument("quantile_bins needs at least target_bins values");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  BinSpec spec;
  spec.target_bins = target_bins;
  for (std::size_t k = 1; k < target_bins; ++k) {
    const std::size_t rank = (k * n + target_bins - 1) / target_bins;  // ceil(k n / T)
    const double cut = sorted[rank - 1];
    if (spec.cuts.empty() || cut != spec.cuts.back()) spec.cuts.push_back(cut);
  }
  // A cut at the maximum leaves the top bin empty.
  if (!spec.cuts.empty() && spec.cuts.back() == sorted.back()) spec.cuts.pop_back();

  spec.bins.assign(spec.cuts.size() + 1, Bin{});
  std::vector<bool> seen(spec.bins.size(), false);
  for (double v : sorted) {
    const std::size_t b = spec.assign(v);
    Bin& bin = spec.bins[b];
    if (!seen[b]) {
      bin.min = v;
      seen[b] = true;
    }
    bin.max = v;
    ++bin.count;
  }
  spec.single_bin = spec.bins.size() == 1;
  if (spec.single_bin) warn(warnings, "all values identical; single bin");
  return spec;
}

// ---------------------------------------------------------------------------
// Stratified recall

struct StratumReport {
  std::string label;
  std::size_t n = 0;
  std::size_t matched = 0;
  double recall = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t skipped_replicates = 0;
  bool unstable = false;
};

/// Assignment of outcomes to strata: stratum[i] indexes `labels`, or is
/// empty to leave outcome i out of every stratum.
struct Strata {
  std::vector<std::string> labels;
  std::vector<std::optional<std::size_t>> stratum;
};

/// Cluster index (position in corpus.documents()) of each outcome.
inline std::vector<std::size_t> outcome_clusters(const std::vector<MatchOutcome>& outcomes,
                                                 const Corpus& corpus) {
  std::vector<std::size_t> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(corpus.document_index(o.doc_id));
  return out;
}

/// Per-stratum recall with document-cluster bootstrap intervals. Strata with
/// no outcomes are omitted (with a warning).
inline std::vector<StratumReport> stratified_recall(const std::vector<MatchOutcome>& outcomes,
                                                    const Strata& strata, const Corpus& corpus,
                                                    const BootstrapConfig& config,
                                                    Warnings* warnings = nullptr) {
  if (strata.stratum.size() != outcomes.size()) {
    throw std::invalid_argument("strata must align with outcomes");
  }
  const std::size_t n_docs = corpus.documents().size();
  const std::size_t n_labels = strata.labels.size();
  const auto clusters = outcome_clusters(outcomes, corpus);

  // counts[doc * n_labels + s] = {n, matched}
  std::vector<std::array<std::size_t, 2>> counts(n_docs * n_labels, {0, 0});
  std::vector<std::size_t> totals(n_labels, 0);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!strata.stratum[i]) continue;
    const std::size_t s = *strata.stratum[i];
    if (s >= n_labels) throw std::out_of_range("stratum index out of range");
    auto& c = counts[clusters[i] * n_labels + s];
    ++c[0];
    c[1] += static_cast<std::size_t>(outcomes[i].is_matched);
    ++totals[s];
  }
  std::vector<std::size_t> active;
  for (std::size_t s = 0; s < n_labels; ++s) {
    if (totals[s] == 0) {
      warn(warnings, "stratum \"" + strata.labels[s] + "\" is empty; omitted");
    } else {
      active.push_back(s);
    }
  }
  if (active.empty()) return {};

  auto stat = [&](std::span<const std::size_t> picks) {
    std::vector<std::size_t> n(active.size(), 0);
    std::vector<std::size_t> hits(active.size(), 0);
    for (std::size_t d : picks) {
      for (std::size_t a = 0; a < active.size(); ++a) {
        const auto& c = counts[d * n_labels + active[a]];
        n[a] += c[0];
        hits[a] += c[1];
      }
    }
    std::vector<std::optional<double>> out(active.size());
    for (std::size_t a = 0; a < active.size(); ++a) {
      if (n[a] > 0) out[a] = static_cast<double>(hits[a]) / static_cast<double>(n[a]);
    }
    return out;
  };
  const auto estimates = cluster_bootstrap_multi(n_docs, active.size(), stat, config);

  std::vector<StratumReport> reports;
  for (std::size_t a = 0; a < active.size(); ++a) {
    const std::size_t s = active[a];
    StratumReport r;
    r.label = strata.labels[s];
    r.n = totals[s];
    for (std::size_t d = 0; d < n_docs; ++d) r.matched += counts[d * n_labels + s][1];
    r.recall = estimates[a].point;
    r.ci_low = estimates[a].ci_low;
    r.ci_high = estimates[a].ci_high;
    r.skipped_replicates = estimates[a].skipped;
    r.unstable = estimates[a].unstable();
    if (r.unstable) warn(warnings, "stratum \"" + r.label + "\" unstable under resampling");
    reports.push_back(std::move(r));
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Group profiles

/// Mean z-score of each index per group. Columns follow `indices`; rows
/// follow `groups` (groups without any defined span are dropped).
struct ProfileMatrix {
  std::vector<std::string> groups;
  std::vector<std::size_t> n;
  std::vector<Index> indices;
  std::vector<std::vector<double>> cells;  // [group][column]
};

/// `group[i]` indexes `group_labels` (or is empty to skip span i). Spans with
/// undefined index vectors are skipped. Constant indices are omitted.
inline ProfileMatrix group_profile(const std::vector<IndexVector>& vectors,
                                   const std::vector<std::optional<std::size_t>>& group,
                                   const std::vector<std::string>& group_labels,
                                   const IndexZParams& zparams, Warnings* warnings = nullptr) {
  if (group.size() != vectors.size()) throw std::invalid_argument("grouping must align with vectors");
  ProfileMatrix m;
  for (Index idx : kAllIndices) {
    if (zparams[index_position(idx)].constant()) {
      warn(warnings, "index " + std::string(index_key(idx)) + " is constant; column omitted");
    } else {
      m.indices.push_back(idx);
    }
  }
  std::vector<std::vector<double>> sums(group_labels.size(), std::vector<double>(m.indices.size(), 0.0));
  std::vector<std::size_t> counts(group_labels.size(), 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (!group[i] || !vectors[i].defined()) continue;
    const std::size_t g = *group[i];
    ++counts[g];
    for (std::size_t c = 0; c < m.indices.size(); ++c) {
      const Index idx = m.indices[c];
      sums[g][c] += zparams[index_position(idx)](vectors[i].value(idx));
    }
  }
  for (std::size_t g = 0; g < group_labels.size(); ++g) {
    if (counts[g] == 0) continue;
    m.groups.push_back(group_labels[g]);
    m.n.push_back(counts[g]);
    std::vector<double> row(m.indices.size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = sums[g][c] / static_cast<double>(counts[g]);
    m.cells.push_back(std::move(row));
  }
  return m;
}

}  // namespace spanrel
