#pragma once

// CSV table rendering. Reals use 6 significant digits ("%.6g"), so tables
// are byte-stable for identical inputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spanrel/category.hpp"
#include "spanrel/indices.hpp"
#include "spanrel/matching.hpp"
#include "spanrel/regression.hpp"
#include "spanrel/stratification.hpp"

namespace spanrel::report {

inline std::string real(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw std::logic_error("CSV row has wrong column count");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ += ',';
      out_ += csv_field(fields[i]);
    }
    out_ += '\n';
  }

  const std::string& str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

inline std::vector<std::string> index_columns() {
  std::vector<std::string> out;
  for (Index i : kAllIndices) out.emplace_back(index_key(i));
  return out;
}

/// Per-span table. `outcomes` holds one outcome list per criterion, each
/// sorted by span_id; rows follow that order.
inline std::string span_table(const Corpus& corpus, const std::vector<IndexVector>& vectors,
                              const std::vector<std::vector<MatchOutcome>>& outcomes) {
  std::vector<std::string> header{"span_id", "doc_id", "category"};
  for (auto& c : index_columns()) header.push_back(c);
  header.insert(header.end(), {"n_words", "n_sentences", "defined"});
  for (const auto& list : outcomes) {
    const std::string name = list.empty() ? "exact" : list.front().criterion.name();
    header.push_back("is_matched_" + name);
    if (!list.empty() && list.front().criterion.kind == MatchKind::IoU) header.push_back("best_iou");
  }
  CsvWriter w(header);

  std::vector<std::size_t> order(corpus.gold().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus.gold()[a].span_id < corpus.gold()[b].span_id;
  });
  for (std::size_t r = 0; r < order.size(); ++r) {
    const GoldSpan& g = corpus.gold()[order[r]];
    const IndexVector& v = vectors[order[r]];
    std::vector<std::string> row{g.span_id, g.doc_id, std::string(category_label(g.category))};
    for (Index i : kAllIndices) row.push_back(v.defined() ? real(v.value(i)) : "");
    row.insert(row.end(), {std::to_string(v.n_words), std::to_string(v.n_sentences),
                           v.defined() ? "1" : "0"});
    for (const auto& list : outcomes) {
      const MatchOutcome& o = list.at(r);
      if (o.span_id != g.span_id) throw std::logic_error("outcomes not aligned with spans");
      row.push_back(std::to_string(o.is_matched));
      if (o.criterion.kind == MatchKind::IoU) row.push_back(real(o.best_iou));
    }
    w.row(row);
  }
  return w.str();
}

inline std::string outcome_table(const std::vector<MatchOutcome>& outcomes) {
  CsvWriter w({"span_id", "doc_id", "category", "criterion", "iou_threshold", "is_matched", "best_iou",
               "no_token_coverage"});
  for (const auto& o : outcomes) {
    const bool iou = o.criterion.kind == MatchKind::IoU;
    w.row({o.span_id, o.doc_id, std::string(category_label(o.category)), o.criterion.name(),
           iou ? real(o.criterion.iou_threshold) : "", std::to_string(o.is_matched),
           iou ? real(o.best_iou) : "", o.no_token_coverage ? "1" : "0"});
  }
  return w.str();
}

struct LabeledStrata {
  std::string criterion;
  std::string index;  // empty for category tables
  const BinSpec* bins = nullptr;
  std::vector<StratumReport> reports;
};

inline std::string category_recall_table(const std::vector<LabeledStrata>& tables) {
  CsvWriter w({"criterion", "category", "n", "matched", "recall", "ci_low", "ci_high", "unstable"});
  for (const auto& t : tables) {
    for (const auto& r : t.reports) {
      w.row({t.criterion, r.label, std::to_string(r.n), std::to_string(r.matched), real(r.recall),
             real(r.ci_low), real(r.ci_high), r.unstable ? "1" : "0"});
    }
  }
  return w.str();
}

struct NamedBins {
  std::string index;
  BinSpec spec;        // continuous indices
  bool binary = false; // natural 0/1 strata
  std::size_t zeros = 0;
  std::size_t ones = 0;
};

inline std::string bin_table(const std::vector<NamedBins>& all) {
  CsvWriter w({"index", "bin", "min", "max", "n"});
  for (const auto& b : all) {
    if (b.binary) {
      w.row({b.index, "0", "0", "0", std::to_string(b.zeros)});
      w.row({b.index, "1", "1", "1", std::to_string(b.ones)});
      continue;
    }
    for (std::size_t i = 0; i < b.spec.bins.size(); ++i) {
      const Bin& bin = b.spec.bins[i];
      w.row({b.index, std::to_string(i), real(bin.min), real(bin.max), std::to_string(bin.count)});
    }
  }
  return w.str();
}

inline std::string stratified_table(const std::vector<LabeledStrata>& tables) {
  CsvWriter w({"criterion", "index", "stratum", "range_min", "range_max", "n", "recall", "ci_low",
               "ci_high", "unstable"});
  for (const auto& t : tables) {
    for (const auto& r : t.reports) {
      std::string lo = r.label;
      std::string hi = r.label;
      if (t.bins) {
        const Bin& bin = t.bins->bins.at(std::stoul(r.label));
        lo = real(bin.min);
        hi = real(bin.max);
      }
      w.row({t.criterion, t.index, r.label, lo, hi, std::to_string(r.n), real(r.recall),
             real(r.ci_low), real(r.ci_high), r.unstable ? "1" : "0"});
    }
  }
  return w.str();
}

inline std::string regression_table(const std::vector<std::pair<std::string, RegressionResult>>& fits) {
  CsvWriter w({"criterion", "term", "coef", "ci_low", "ci_high"});
  for (const auto& [criterion, fit] : fits) {
    for (const auto& t : fit.terms) {
      w.row({criterion, t.name, real(t.coefficient), real(t.ci_low), real(t.ci_high)});
    }
  }
  return w.str();
}

inline std::string profile_table(const ProfileMatrix& m) {
  std::vector<std::string> header{"group", "n"};
  for (Index i : kAllIndices) header.emplace_back(index_key(i));
  CsvWriter w(header);
  for (std::size_t g = 0; g < m.groups.size(); ++g) {
    std::vector<std::string> row{m.groups[g], std::to_string(m.n[g])};
    for (Index i : kAllIndices) {
      auto it = std::find(m.indices.begin(), m.indices.end(), i);
      row.push_back(it == m.indices.end() ? "" : real(m.cells[g][static_cast<std::size_t>(it - m.indices.begin())]));
    }
    w.row(row);
  }
  return w.str();
}

}  // namespace spanrel::report
