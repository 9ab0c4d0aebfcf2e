#pragma once

// Category-controlled logistic regression of is_matched on the seven
// z-scored indices, with document-cluster bootstrap intervals obtained by
// refitting on every resample.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "spanrel/bootstrap.hpp"
#include "spanrel/corpus.hpp"
#include "spanrel/indices.hpp"
#include "spanrel/logistic.hpp"
#include "spanrel/matching.hpp"
#include "spanrel/stratification.hpp"

namespace spanrel {

struct RegressionOptions {
  double lambda = 1e-4;
  bool zscore_binary = true;  // false enters hedge/negation as raw 0/1
  BootstrapConfig bootstrap;
};

struct RegressionTerm {
  std::string name;
  double coefficient = 0.0;  // log-odds
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t skipped_replicates = 0;
};

struct RegressionResult {
  std::vector<RegressionTerm> terms;
  std::size_t n = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double lambda = 0.0;
  DecisionCategory reference{};
  std::string ci_method = "percentile cluster bootstrap";
};

inline std::string category_term_name(DecisionCategory c) {
  return "Category: " + std::string(category_label(c));
}

/// Design matrix columns in order: intercept, non-constant indices, category
/// dummies (reference category excluded).
struct RegressionDesign {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> names;
  std::vector<std::size_t> row_cluster;  // document index per row
  std::size_t first_dummy = 0;           // column where dummies start
  DecisionCategory reference{};
};

/// `gold_vectors` aligns with corpus.gold(); outcomes join on span_id.
inline RegressionDesign build_regression_design(const Corpus& corpus,
                                                const std::vector<MatchOutcome>& outcomes,
                                                const std::vector<IndexVector>& gold_vectors,
                                                bool zscore_binary, Warnings* warnings = nullptr) {
  if (gold_vectors.size() != corpus.gold().size()) {
    throw std::invalid_argument("gold_vectors must align with corpus.gold()");
  }
  std::unordered_map<std::string, std::size_t> gold_pos;
  for (std::size_t i = 0; i < corpus.gold().size(); ++i) gold_pos.emplace(corpus.gold()[i].span_id, i);

  struct Row {
    const IndexVector* v;
    DecisionCategory category;
    int y;
    std::size_t cluster;
  };
  std::vector<Row> rows;
  std::size_t undefined = 0;
  for (const auto& o : outcomes) {
    auto it = gold_pos.find(o.span_id);
    if (it == gold_pos.end()) throw ValidationError("outcome for unknown span_id \"" + o.span_id + "\"");
    const IndexVector& v = gold_vectors[it->second];
    if (!v.defined()) {
      ++undefined;
      continue;
    }
    rows.push_back({&v, o.category, o.is_matched, corpus.document_index(o.doc_id)});
  }
  if (undefined) warn(warnings, std::to_string(undefined) + " spans without words excluded from regression");
  if (rows.size() < 2) throw ComputationError("regression needs at least two defined spans");

  RegressionDesign d;
  std::array<std::size_t, kCategoryCount> freq{};
  for (const auto& r : rows) ++freq[category_index(r.category)];
  d.reference = kAllCategories[static_cast<std::size_t>(
      std::max_element(freq.begin(), freq.end()) - freq.begin())];

  struct IndexColumn {
    Index idx;
    ZScoreParams z;
    bool standardize;
  };
  std::vector<IndexColumn> index_columns;
  for (Index idx : kAllIndices) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.push_back(r.v->value(idx));
    const ZScoreParams z = fit_zscore(values);
    if (z.constant()) {
      warn(warnings, "index " + std::string(index_key(idx)) + " is constant; term omitted");
      continue;
    }
    index_columns.push_back({idx, z, zscore_binary || !is_binary(idx)});
  }
  std::vector<DecisionCategory> dummies;
  for (DecisionCategory c : kAllCategories) {
    if (c == d.reference) continue;
    if (freq[category_index(c)] == 0) {
      warn(warnings, "category " + std::string(category_label(c)) + " absent; dummy omitted");
      continue;
    }
    dummies.push_back(c);
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(1 + index_columns.size() + dummies.size());
  d.X = Eigen::MatrixXd::Zero(n, p);
  d.y.resize(n);
  d.names.push_back("(Intercept)");
  for (const auto& c : index_columns) d.names.emplace_back(index_label(c.idx));
  for (DecisionCategory c : dummies) d.names.push_back(category_term_name(c));
  d.first_dummy = 1 + index_columns.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    d.X(i, 0) = 1.0;
    for (std::size_t c = 0; c < index_columns.size(); ++c) {
      const auto& col = index_columns[c];
      const double x = r.v->value(col.idx);
      d.X(i, static_cast<Eigen::Index>(1 + c)) = col.standardize ? col.z(x) : x;
    }
    for (std::size_t k = 0; k < dummies.size(); ++k) {
      if (r.category == dummies[k]) d.X(i, static_cast<Eigen::Index>(d.first_dummy + k)) = 1.0;
    }
    d.y(i) = r.y;
    d.row_cluster.push_back(r.cluster);
  }
  return d;
}

namespace detail {

/// Fits on the selected rows, dropping columns that are constant there.
/// Returns one optional coefficient per design column.
inline std::vector<std::optional<double>> refit(const RegressionDesign& d,
                                                const std::vector<std::size_t>& rows,
                                                const LogisticOptions& options) {
  const Eigen::Index p = d.X.cols();
  std::vector<std::optional<double>> out(static_cast<std::size_t>(p));
  if (rows.empty()) return out;
  std::vector<Eigen::Index> keep{0};
  for (Eigen::Index c = 1; c < p; ++c) {
    const double first = d.X(static_cast<Eigen::Index>(rows.front()), c);
    bool varies = false;
    for (std::size_t r : rows) {
      if (d.X(static_cast<Eigen::Index>(r), c) != first) {
        varies = true;
        break;
      }
    }
    if (varies) keep.push_back(c);
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(keep.size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    for (std::size_t k = 0; k < keep.size(); ++k) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = d.X(r, keep[k]);
    y(static_cast<Eigen::Index>(i)) = d.y(r);
  }
  try {
    const LogisticFit fit = fit_logistic(X, y, options);
    if (!fit.converged) return out;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      out[static_cast<std::size_t>(keep[k])] = fit.coefficients(static_cast<Eigen::Index>(k));
    }
  } catch (const ComputationError&) {
  }
  return out;
}

}  // namespace detail

inline RegressionResult regress_matching(const Corpus& corpus, const std::vector<MatchOutcome>& outcomes,
                                         const std::vector<IndexVector>& gold_vectors,
                                         const RegressionOptions& options, Warnings* warnings = nullptr) {
  const RegressionDesign d =
      build_regression_design(corpus, outcomes, gold_vectors, options.zscore_binary, warnings);
  if (d.y.size() == 0 || d.y.minCoeff() == d.y.maxCoeff()) {
    throw ComputationError("match outcome is constant; coefficients are not identifiable");
  }
  LogisticOptions lo;
  lo.lambda = options.lambda;
  const LogisticFit fit = fit_logistic(d.X, d.y, lo);
  if (!fit.converged) {
    warn(warnings, "logistic fit did not converge in " + std::to_string(fit.iterations) +
                       " iterations; consider a larger ridge lambda");
  }

  const std::size_t n_docs = corpus.documents().size();
  std::vector<std::vector<std::size_t>> rows_by_doc(n_docs);
  for (std::size_t i = 0; i < d.row_cluster.size(); ++i) rows_by_doc[d.row_cluster[i]].push_back(i);

  const auto p = static_cast<std::size_t>(d.X.cols());
  auto stat = [&](std::span<const std::size_t> picks) {
    std::vector<std::size_t> rows;
    for (std::size_t doc : picks) rows.insert(rows.end(), rows_by_doc[doc].begin(), rows_by_doc[doc].end());
    return detail::refit(d, rows, lo);
  };
  std::vector<double> point(fit.coefficients.data(), fit.coefficients.data() + p);
  auto estimates = cluster_bootstrap_multi(n_docs, p, stat, options.bootstrap, point);

  RegressionResult result;
  result.n = static_cast<std::size_t>(d.X.rows());
  result.iterations = fit.iterations;
  result.converged = fit.converged;
  result.lambda = fit.lambda;
  result.reference = d.reference;
  for (std::size_t k = 0; k < p; ++k) {
    RegressionTerm t;
    t.name = d.names[k];
    t.coefficient = fit.coefficients(static_cast<Eigen::Index>(k));
    t.ci_low = estimates[k].ci_low;
    t.ci_high = estimates[k].ci_high;
    t.skipped_replicates = estimates[k].skipped;
    if (estimates[k].unstable()) warn(warnings, "term \"" + t.name + "\" unstable under resampling");
    result.terms.push_back(std::move(t));
  }
  return result;
}

}  // namespace spanrel
