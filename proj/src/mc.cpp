#include "levywalk/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace levywalk {
namespace {

McEstimate summarize(const CompensatedSum& sum, const CompensatedSum& sum_sq, const CompensatedSum& steps,
                     const CompensatedSum& steps_sq, std::uint64_t paths, std::uint64_t seed) {
  const double m = static_cast<double>(paths);
  McEstimate e;
  e.m_paths = paths;
  e.seed = seed;
  e.u_hat = sum.value() / m;
  e.var_hat = std::max(0.0, (sum_sq.value() / m - e.u_hat * e.u_hat) / m);
  e.half_width = 2.0 * std::sqrt(e.var_hat);
  e.steps_mean = steps.value() / m;
  const double steps_var = std::max(0.0, (steps_sq.value() / m - e.steps_mean * e.steps_mean) / m);
  e.steps_half_width = 2.0 * std::sqrt(steps_var);
  return e;
}

unsigned resolve_workers(unsigned requested, std::size_t jobs) {
  unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

void CompensatedSum::add(double v) noexcept {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v)) {
    carry += (sum - t) + v;
  } else {
    carry += (v - t) + sum;
  }
  sum = t;
}

Payoffs feynman_kac_payoff() {
  Payoffs p;
  p.outputs = 1;
  p.evaluate = [](const PideProblem& problem, const WalkOutcome& w, std::span<double> out) {
    out[0] = problem.boundary_value(w.exit_time, w.x_exit) * w.y_exit + w.z_exit;
  };
  return p;
}

ShardAccumulator run_shard(const PideProblem& problem, std::span<const double> x0, const McSettings& settings,
                           const Payoffs& payoffs, std::uint64_t begin, std::uint64_t end) {
  if (!(begin < end) || end > settings.paths) throw std::invalid_argument("mc: empty or out-of-range shard");
  if (begin % kBlockPaths != 0 || (end % kBlockPaths != 0 && end != settings.paths)) {
    throw std::invalid_argument("mc: shard boundaries must align with reduction blocks");
  }
  if (payoffs.outputs == 0 || !payoffs.evaluate) throw std::invalid_argument("mc: no payoff to evaluate");

  const CutoffQuantities cut = cutoff_quantities(problem.measure(), settings.eps);
  // Fail fast on the calling thread for a bad starting point or step cap.
  ChainRunner probe(problem, cut, settings.h, payoffs.monitor);
  if (x0.size() != problem.dim() || !problem.domain().contains(x0)) {
    throw std::invalid_argument("mc: starting point must lie inside the domain");
  }

  ShardAccumulator shard;
  shard.begin = begin;
  shard.end = end;
  shard.outputs = payoffs.outputs;
  const std::uint64_t n_blocks = (end - begin + kBlockPaths - 1) / kBlockPaths;
  shard.blocks.resize(n_blocks);

  std::atomic<std::uint64_t> next_block{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    try {
      ChainRunner runner(problem, cut, settings.h, payoffs.monitor);
      WalkOutcome outcome;
      std::vector<double> values(payoffs.outputs);
      for (;;) {
        const std::uint64_t b = next_block.fetch_add(1);
        if (b >= n_blocks || failed.load()) return;
        BlockSums& sums = shard.blocks[b];
        sums.payoff.assign(payoffs.outputs, {});
        sums.payoff_sq.assign(payoffs.outputs, {});
        const std::uint64_t first = begin + b * kBlockPaths;
        const std::uint64_t last = std::min(first + kBlockPaths, end);
        for (std::uint64_t path = first; path < last; ++path) {
          RandomStream stream(settings.seed, path);
          runner.run(x0, stream, outcome);
          payoffs.evaluate(problem, outcome, values);
          for (std::size_t i = 0; i < values.size(); ++i) {
            sums.payoff[i].add(values[i]);
            sums.payoff_sq[i].add(values[i] * values[i]);
          }
          const double k = static_cast<double>(outcome.steps);
          sums.steps.add(k);
          sums.steps_sq.add(k * k);
        }
        sums.count = last - first;
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };

  const unsigned n_workers = resolve_workers(settings.workers, n_blocks);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return shard;
}

std::vector<McEstimate> merge(std::span<const ShardAccumulator> shards, std::uint64_t paths, std::uint64_t seed) {
  if (paths < 2) throw std::invalid_argument("mc: at least two paths are needed for a variance");
  if (shards.empty()) throw std::invalid_argument("mc: nothing to merge");

  std::vector<const ShardAccumulator*> order;
  for (const auto& s : shards) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->begin < b->begin; });

  const std::size_t outputs = order.front()->outputs;
  std::uint64_t expected = 0;
  for (const auto* s : order) {
    if (s->begin != expected) throw std::invalid_argument("mc: shards leave a gap or overlap");
    if (s->outputs != outputs) throw std::invalid_argument("mc: shards disagree on the number of outputs");
    if (s->begin % kBlockPaths != 0) throw std::invalid_argument("mc: shard is not block aligned");
    expected = s->end;
  }
  if (expected != paths) throw std::invalid_argument("mc: shards do not cover every path");

  std::vector<CompensatedSum> sum(outputs), sum_sq(outputs);
  CompensatedSum steps, steps_sq;
  std::uint64_t counted = 0;
  for (const auto* s : order) {
    for (const auto& block : s->blocks) {
      for (std::size_t i = 0; i < outputs; ++i) {
        sum[i].add(block.payoff[i].value());
        sum_sq[i].add(block.payoff_sq[i].value());
      }
      steps.add(block.steps.value());
      steps_sq.add(block.steps_sq.value());
      counted += block.count;
    }
  }
  if (counted != paths) throw std::invalid_argument("mc: shard contents do not match their ranges");

  std::vector<McEstimate> out;
  out.reserve(outputs);
  for (std::size_t i = 0; i < outputs; ++i) out.push_back(summarize(sum[i], sum_sq[i], steps, steps_sq, paths, seed));
  return out;
}

std::vector<McEstimate> estimate_many(const PideProblem& problem, std::span<const double> x0,
                                      const McSettings& settings, const Payoffs& payoffs) {
  if (settings.paths < 2) throw std::invalid_argument("mc: at least two paths are needed for a variance");
  const ShardAccumulator shard = run_shard(problem, x0, settings, payoffs, 0, settings.paths);
  return merge(std::span(&shard, 1), settings.paths, settings.seed);
}

McEstimate estimate(const PideProblem& problem, std::span<const double> x0, const McSettings& settings) {
  return estimate_many(problem, x0, settings, feynman_kac_payoff()).front();
}

}  // namespace levywalk
