#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "secretary/protocol.hpp"
#include "secretary/util.hpp"

namespace secretary {

// Counter-based generator: a Weyl sequence pushed through the splitmix64
// finalizer. One independent stream per trial keeps the output identical
// for any worker count.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial_index) {
  return SplitMix64{detail::mix64(detail::mix64(seed) ^
                                  (0x9E3779B97F4A7C15ull * (trial_index + 1)))};
}

// Unbiased bounded draw (multiply-shift with rejection); avoids the
// implementation-defined std::uniform_int_distribution.
inline std::uint64_t uniform_below(SplitMix64& g, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(g.next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t cutoff = (0 - bound) % bound;
    while (low < cutoff) {
      m = static_cast<unsigned __int128>(g.next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Inside-out Fisher-Yates; fills out with a uniform permutation of 1..n.
inline void random_permutation(SplitMix64& g, std::span<int> out) {
  for (std::size_t p = 0; p < out.size(); ++p) {
    const auto r = static_cast<std::size_t>(uniform_below(g, p + 1));
    out[p] = out[r];
    out[r] = static_cast<int>(p + 1);
  }
}

struct SimulationReport {
  std::int64_t trials = 0;
  double mean_ratio = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  int n = 0, queues = 0, quotas = 0, ranks = 0;
};

// Seeded Monte Carlo estimate of the competitive ratio. Trials are grouped
// into fixed blocks; each block is reduced sequentially by trial index and
// blocks are combined in index order, so the report is bit-identical for
// any worker count.
inline SimulationReport monte_carlo(const ValidatedSpec& s, const ThresholdTable& thr,
                                    std::int64_t trials, std::uint64_t seed, int threads = 1) {
  if (trials < 2) throw std::invalid_argument("monte_carlo requires trials >= 2");
  if (!thr.matches(s) || thr.horizon != s.positions_per_queue())
    throw std::invalid_argument("thresholds do not match spec");
  if (threads < 1) threads = 1;

  constexpr std::int64_t kBlock = 4096;
  const std::int64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<double> block_sum(static_cast<std::size_t>(blocks));
  std::vector<double> block_sumsq(static_cast<std::size_t>(blocks));

  const double inv_w = 1.0 / s.offline_optimum();
  std::atomic<std::int64_t> next_block{0};
  const auto worker = [&]() {
    std::vector<int> arrival(static_cast<std::size_t>(s.n()));
    RunWorkspace ws;
    RunResult run;
    for (;;) {
      const std::int64_t blk = next_block.fetch_add(1);
      if (blk >= blocks) return;
      const std::int64_t first = blk * kBlock;
      const std::int64_t last = std::min(first + kBlock, trials);
      KahanSum sum, sumsq;
      for (std::int64_t trial = first; trial < last; ++trial) {
        SplitMix64 g = trial_stream(seed, static_cast<std::uint64_t>(trial));
        random_permutation(g, arrival);
        run_instance(s, thr, arrival, ws, run);
        const double ratio = run.payoff * inv_w;
        sum.add(ratio);
        sumsq.add(ratio * ratio);
      }
      block_sum[static_cast<std::size_t>(blk)] = sum.value();
      block_sumsq[static_cast<std::size_t>(blk)] = sumsq.value();
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  KahanSum sum, sumsq;
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    sum.add(block_sum[static_cast<std::size_t>(blk)]);
    sumsq.add(block_sumsq[static_cast<std::size_t>(blk)]);
  }

  SimulationReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.n = s.n();
  rep.queues = s.queues();
  rep.quotas = s.quotas();
  rep.ranks = s.ranks();
  rep.mean_ratio = sum.value() / static_cast<double>(trials);
  const double var =
      (sumsq.value() - sum.value() * sum.value() / static_cast<double>(trials)) /
      static_cast<double>(trials - 1);
  rep.std_error = std::sqrt((var > 0.0 ? var : 0.0) / static_cast<double>(trials));
  return rep;
}

inline void write_simulation_report(const SimulationReport& rep, std::ostream& out) {
  out << "trials=" << rep.trials << '\n'
      << "mean_ratio=" << format_real(rep.mean_ratio) << '\n'
      << "std_error=" << format_real(rep.std_error) << '\n'
      << "seed=" << rep.seed << '\n';
}

}  // namespace secretary
