#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levywalk/model.hpp"
#include "levywalk/walk.hpp"

namespace levywalk {

/// Monte Carlo estimate of one functional of the chain.
struct McEstimate {
  double u_hat = 0.0;
  double var_hat = 0.0;     ///< (mean of payoff^2 - mean^2) / M
  double half_width = 0.0;  ///< 2 sqrt(var_hat), the 95% band
  std::uint64_t m_paths = 0;
  double steps_mean = 0.0;
  double steps_half_width = 0.0;
  std::uint64_t seed = 0;
};

struct McSettings {
  double eps = 0.0;
  double h = 1.0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;  ///< 0 means one per hardware thread; never changes results
};

/// Writes one value per output for a finished chain.
using PayoffFn = std::function<void(const PideProblem&, const WalkOutcome&, std::span<double>)>;

struct Payoffs {
  std::size_t outputs = 1;
  PayoffFn evaluate;
  const PathMonitor* monitor = nullptr;
};

/// phi(exit_time, X) * Y + Z.
Payoffs feynman_kac_payoff();

/// Chains are reduced in fixed blocks of this many consecutive path indices;
/// the block layout, not the worker count, fixes the summation order.
inline constexpr std::uint64_t kBlockPaths = 4096;

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) noexcept;
  double value() const noexcept { return sum + carry; }
};

struct BlockSums {
  std::uint64_t count = 0;
  std::vector<CompensatedSum> payoff;
  std::vector<CompensatedSum> payoff_sq;
  CompensatedSum steps;
  CompensatedSum steps_sq;
};

/// Partial result for the path range [begin, end). begin must sit on a block
/// boundary; end must too unless it is the last path.
struct ShardAccumulator {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::size_t outputs = 0;
  std::vector<BlockSums> blocks;
};

ShardAccumulator run_shard(const PideProblem& problem, std::span<const double> x0, const McSettings& settings,
                           const Payoffs& payoffs, std::uint64_t begin, std::uint64_t end);

/// Reduces shards covering 0..paths-1 exactly once, in path order. Throws
/// std::invalid_argument on gaps, overlaps or misaligned shards.
std::vector<McEstimate> merge(std::span<const ShardAccumulator> shards, std::uint64_t paths, std::uint64_t seed);

/// One estimate per payoff output. Bit-identical for fixed (settings.seed,
/// settings.paths) regardless of settings.workers.
std::vector<McEstimate> estimate_many(const PideProblem& problem, std::span<const double> x0,
                                      const McSettings& settings, const Payoffs& payoffs);

/// Estimate of u^eps(t0, x0) with the Feynman-Kac payoff.
McEstimate estimate(const PideProblem& problem, std::span<const double> x0, const McSettings& settings);

}  // namespace levywalk
