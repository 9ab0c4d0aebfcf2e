#pragma once

// Document-level cluster bootstrap with percentile intervals.
//
// Replicate k draws its documents from Rng(seed, k), so results do not depend
// on how replicates are scheduled across worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spanrel/error.hpp"
#include "spanrel/rng.hpp"

namespace spanrel {

struct BootstrapConfig {
  std::size_t replicates = 2000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  unsigned workers = 1;  // does not affect results

  void validate() const {
    if (replicates < 1) throw std::invalid_argument("bootstrap replicates must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
      throw std::invalid_argument("ci_level must lie in (0, 1)");
    }
  }
};

/// Share of skipped replicates above which an estimate is flagged unstable.
inline constexpr double kUnstableSkipFraction = 0.10;

struct BootstrapEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t replicates = 0;  // requested
  std::size_t skipped = 0;     // replicates where the statistic was undefined

  bool unstable() const {
    return static_cast<double>(skipped) > kUnstableSkipFraction * static_cast<double>(replicates);
  }
};

/// Nearest-rank quantile of ascending `sorted` at probability q in [0, 1].
inline double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("nearest_rank on empty sample");
  const double m = static_cast<double>(sorted.size());
  // The epsilon absorbs representation error in q*m (0.025 * 2000 = 50).
  double rank = std::ceil(q * m - 1e-9);
  rank = std::clamp(rank, 1.0, m);
  return sorted[static_cast<std::size_t>(rank) - 1];
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < n; k += workers) fn(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Draws one resample of cluster indices (with replacement, same count).
inline std::vector<std::size_t> resample_clusters(std::size_t n_clusters, std::uint64_t seed,
                                                  std::size_t replicate) {
  Rng rng(seed, replicate);
  std::vector<std::size_t> picks(n_clusters);
  for (auto& p : picks) p = static_cast<std::size_t>(rng.below(n_clusters));
  return picks;
}

/// Bootstraps `n_stats` statistics at once. `stat` maps a multiset of cluster
/// indices to one optional value per statistic (nullopt = undefined on that
/// resample). The point estimate uses every cluster once unless supplied by
/// the caller. Percentile bounds are widened, if needed, so that they always
/// contain the point estimate.
template <class Statistic>
std::vector<BootstrapEstimate> cluster_bootstrap_multi(
    std::size_t n_clusters, std::size_t n_stats, Statistic&& stat, const BootstrapConfig& config,
    const std::optional<std::vector<double>>& given_point = std::nullopt) {
  config.validate();
  if (n_clusters == 0) throw ComputationError("cluster bootstrap needs at least one cluster");

  std::vector<std::optional<double>> point;
  if (given_point) {
    point.assign(given_point->begin(), given_point->end());
  } else {
    std::vector<std::size_t> all(n_clusters);
    std::iota(all.begin(), all.end(), std::size_t{0});
    point = stat(std::span<const std::size_t>(all));
  }
  if (point.size() != n_stats) throw std::logic_error("statistic returned wrong arity");

  std::vector<std::vector<std::optional<double>>> draws(config.replicates);
  detail::parallel_for(config.replicates, config.workers, [&](std::size_t k) {
    const auto picks = resample_clusters(n_clusters, config.seed, k);
    draws[k] = stat(std::span<const std::size_t>(picks));
    if (draws[k].size() != n_stats) throw std::logic_error("statistic returned wrong arity");
  });

  const double alpha = 1.0 - config.ci_level;
  std::vector<BootstrapEstimate> out(n_stats);
  for (std::size_t s = 0; s < n_stats; ++s) {
    if (!point[s]) throw ComputationError("statistic undefined on the full sample");
    std::vector<double> values;
    values.reserve(config.replicates);
    for (const auto& d : draws) {
      if (d[s]) values.push_back(*d[s]);
    }
    if (values.empty()) throw ComputationError("statistic undefined under resampling");
    std::sort(values.begin(), values.end());
    BootstrapEstimate& e = out[s];
    e.point = *point[s];
    e.replicates = config.replicates;
    e.skipped = config.replicates - values.size();
    e.ci_low = std::min(nearest_rank(values, alpha / 2.0), e.point);
    e.ci_high = std::max(nearest_rank(values, 1.0 - alpha / 2.0), e.point);
  }
  return out;
}

/// Records of the clusters chosen by one resample, visited in draw order.
template <class Record>
class PooledSample {
 public:
  PooledSample(const std::vector<std::vector<Record>>& clusters, std::span<const std::size_t> picks)
      : clusters_(&clusters), picks_(picks) {}

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t c : picks_) {
      for (const Record& r : (*clusters_)[c]) fn(r);
    }
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (std::size_t c : picks_) n += (*clusters_)[c].size();
    return n;
  }

 private:
  const std::vector<std::vector<Record>>* clusters_;
  std::span<const std::size_t> picks_;
};

/// Scalar statistic over records grouped by document. `stat` receives a
/// PooledSample<Record> and returns std::optional<double>.
template <class Record, class Statistic>
BootstrapEstimate cluster_bootstrap(const std::vector<std::vector<Record>>& clusters,
                                    Statistic&& stat, const BootstrapConfig& config) {
  std::size_t records = 0;
  for (const auto& c : clusters) records += c.size();
  if (records == 0) throw ComputationError("cluster bootstrap needs at least one record");
  auto wrapped = [&](std::span<const std::size_t> picks) {
    return std::vector<std::optional<double>>{stat(PooledSample<Record>(clusters, picks))};
  };
  return cluster_bootstrap_multi(clusters.size(), 1, wrapped, config).front();
}

/// Mean of a 0/1 (or real) field; undefined for an empty sample.
template <class Record, class Field>
auto mean_statistic(Field field) {
  return [field](const PooledSample<Record>& sample) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    sample.for_each([&](const Record& r) {
      sum += static_cast<double>(field(r));
      ++n;
    });
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
}

}  // namespace spanrel
