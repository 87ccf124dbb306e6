// Seeded Monte Carlo simulation of gambler's-ruin games and polygon walks.
//
// Trial t draws from CounterRng(seed, t). Trials are split into contiguous
// shards, one per worker, and every statistic is an exact integer tally, so
// the merged result is bit-identical for any worker count.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "polywalk/domain.hpp"
#include "polywalk/estimate.hpp"
#include "polywalk/rng.hpp"

namespace polywalk::sim {

inline constexpr std::uint64_t kDefaultSeed = 20070101;

struct SimConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t max_steps = 10'000'000;  // per trajectory
  unsigned workers = 1;
};

inline void validate(const SimConfig& c) {
  if (c.trials < 1) throw DomainError("trials must be >= 1");
  if (c.workers < 1) throw DomainError("workers must be >= 1");
  if (c.max_steps < 1) throw DomainError("max_steps must be >= 1");
}

struct RuinOutcome {
  bool won = false;
  std::uint64_t duration = 0;
  bool first_bet_won = false;
};

struct CoverOutcome {
  std::uint64_t cover_time = 0;
  int last_vertex = 0;  // 1..m
  std::uint64_t return_time = 0;
  bool covered_before_return = false;
};

/// One game; nullopt when it has not ended after max_steps bets.
inline std::optional<RuinOutcome> play_ruin(const RuinSpec& s, CounterRng& rng, std::uint64_t max_steps) {
  RuinOutcome out;
  int fortune = s.start;
  while (fortune > 0 && fortune < s.target) {
    if (out.duration == max_steps) return std::nullopt;
    const bool win = rng.bernoulli(s.p);
    if (out.duration == 0) out.first_bet_won = win;
    fortune += win ? 1 : -1;
    ++out.duration;
  }
  out.won = fortune == s.target;
  return out;
}

/// One walk from vertex 0 until every vertex is visited and the walk is back
/// at 0; nullopt when that takes more than max_steps steps.
inline std::optional<CoverOutcome> walk_polygon(const PolygonSpec& s, CounterRng& rng, std::uint64_t max_steps) {
  CoverOutcome out;
  // Unwrapped displacement; the visited set is the arc [low, high].
  std::int64_t pos = 0, low = 0, high = 0;
  const std::int64_t m = s.m;
  bool returned = false;
  std::uint64_t steps = 0;
  while (high - low < m) {
    if (steps == max_steps) return std::nullopt;
    pos += rng.bernoulli(s.p) ? 1 : -1;
    ++steps;
    low = std::min(low, pos);
    high = std::max(high, pos);
    if (pos == 0) returned = true;
  }
  out.cover_time = steps;
  out.covered_before_return = !returned;
  const std::int64_t cycle = m + 1;
  std::int64_t vertex = ((pos % cycle) + cycle) % cycle;
  out.last_vertex = static_cast<int>(vertex);
  do {
    if (steps == max_steps) return std::nullopt;
    vertex = rng.bernoulli(s.p) ? (vertex + 1) % cycle : (vertex + cycle - 1) % cycle;
    ++steps;
    ++out.return_time;
  } while (vertex != 0);
  return out;
}

namespace detail {

/// Runs trials [0, trials) in contiguous shards; `run_shard(begin, end)`
/// returns a tally with `merge`. Shards are merged in index order.
template <class Tally, class RunShard>
Tally run_sharded(const SimConfig& cfg, RunShard run_shard) {
  const std::uint64_t workers = std::min<std::uint64_t>(cfg.workers, cfg.trials);
  std::vector<Tally> partial(workers);
  auto bounds = [&](std::uint64_t w) { return cfg.trials / workers * w + std::min(w, cfg.trials % workers); };
  if (workers == 1) {
    partial[0] = run_shard(0, cfg.trials);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] { partial[w] = run_shard(bounds(w), bounds(w + 1)); });
  }
  Tally total = partial[0];
  for (std::uint64_t w = 1; w < workers; ++w) total.merge(partial[w]);
  return total;
}

struct RuinTally {
  IntegerTally win, duration, given_win, given_broke, first_given_win;
  std::uint64_t truncated = 0;

  void merge(const RuinTally& o) {
    win.merge(o.win);
    duration.merge(o.duration);
    given_win.merge(o.given_win);
    given_broke.merge(o.given_broke);
    first_given_win.merge(o.first_given_win);
    truncated += o.truncated;
  }
};

struct PolygonTally {
  IntegerTally before_return, cover_time, return_time;
  std::vector<IntegerTally> last_vertex;     // indicator of L_i, per vertex
  std::vector<IntegerTally> cover_by_last;   // V restricted to L_i
  std::uint64_t truncated = 0;

  void merge(const PolygonTally& o) {
    before_return.merge(o.before_return);
    cover_time.merge(o.cover_time);
    return_time.merge(o.return_time);
    last_vertex.resize(std::max(last_vertex.size(), o.last_vertex.size()));
    cover_by_last.resize(std::max(cover_by_last.size(), o.cover_by_last.size()));
    for (std::size_t k = 0; k < o.last_vertex.size(); ++k) last_vertex[k].merge(o.last_vertex[k]);
    for (std::size_t k = 0; k < o.cover_by_last.size(); ++k) cover_by_last[k].merge(o.cover_by_last[k]);
    truncated += o.truncated;
  }
};

}  // namespace detail

struct RuinSimResult {
  Estimate win_prob, duration, duration_given_win, duration_given_broke, first_win_given_win;
  std::uint64_t truncated = 0;
};

struct PolygonSimResult {
  Estimate cover_before_return;
  std::vector<Estimate> last_vertex_hist;    // vertex i at position i-1
  Estimate cover_time;
  std::vector<Estimate> cover_time_by_last;  // vertex i at position i-1
  Estimate return_time;
  std::uint64_t truncated = 0;
};

inline RuinSimResult simulate_ruin(const RuinSpec& spec, const SimConfig& cfg) {
  validate(spec);
  validate(cfg);
  const auto tally = detail::run_sharded<detail::RuinTally>(cfg, [&](std::uint64_t begin, std::uint64_t end) {
    detail::RuinTally t;
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      CounterRng rng(cfg.seed, trial);
      const auto o = play_ruin(spec, rng, cfg.max_steps);
      if (!o) {
        ++t.truncated;
        continue;
      }
      t.win.add(o->won);
      t.duration.add(o->duration);
      if (o->won) {
        t.given_win.add(o->duration);
        t.first_given_win.add(o->first_bet_won);
      } else {
        t.given_broke.add(o->duration);
      }
    }
    return t;
  });
  return {tally.win.estimate(),       tally.duration.estimate(),        tally.given_win.estimate(),
          tally.given_broke.estimate(), tally.first_given_win.estimate(), tally.truncated};
}

inline PolygonSimResult simulate_polygon(const PolygonSpec& spec, const SimConfig& cfg) {
  validate(spec);
  validate(cfg);
  const auto m = static_cast<std::size_t>(spec.m);
  const auto tally = detail::run_sharded<detail::PolygonTally>(cfg, [&](std::uint64_t begin, std::uint64_t end) {
    detail::PolygonTally t;
    t.last_vertex.resize(m);
    t.cover_by_last.resize(m);
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      CounterRng rng(cfg.seed, trial);
      const auto o = walk_polygon(spec, rng, cfg.max_steps);
      if (!o) {
        ++t.truncated;
        continue;
      }
      t.before_return.add(o->covered_before_return);
      t.cover_time.add(o->cover_time);
      t.return_time.add(o->return_time);
      for (std::size_t k = 0; k < m; ++k) t.last_vertex[k].add(static_cast<std::size_t>(o->last_vertex) == k + 1);
      t.cover_by_last[static_cast<std::size_t>(o->last_vertex) - 1].add(o->cover_time);
    }
    return t;
  });
  PolygonSimResult res;
  res.cover_before_return = tally.before_return.estimate();
  res.cover_time = tally.cover_time.estimate();
  res.return_time = tally.return_time.estimate();
  for (std::size_t k = 0; k < m; ++k) {
    res.last_vertex_hist.push_back(k < tally.last_vertex.size() ? tally.last_vertex[k].estimate() : Estimate{});
    res.cover_time_by_last.push_back(k < tally.cover_by_last.size() ? tally.cover_by_last[k].estimate()
                                                                      : Estimate{});
  }
  res.truncated = tally.truncated;
  return res;
}

/// Stream ids at or above this value are reserved for occupancy blocks.
inline constexpr std::uint64_t kOccupancyStreamBase = 1ULL << 63;
inline constexpr std::uint64_t kOccupancyBlock = 1ULL << 16;

/// Fraction of the first `steps` steps of one long walk spent at each vertex
/// (position after each step; entry k is vertex k).
///
/// Block b of kOccupancyBlock steps draws from stream kOccupancyStreamBase + b.
/// Each block is walked from a relative origin and its counts are rotated by
/// the net displacement of all earlier blocks, which is what lets blocks run
/// on different workers.
inline std::vector<double> simulate_occupancy(const PolygonSpec& spec, std::uint64_t steps, const SimConfig& cfg) {
  validate(spec);
  validate(cfg);
  if (steps < 1) throw DomainError("steps must be >= 1");
  const auto cycle = static_cast<std::uint64_t>(spec.m) + 1;

  struct Block {
    std::vector<std::uint64_t> counts;  // by position relative to block start
    std::uint64_t shift = 0;            // net displacement mod cycle
  };
  const std::uint64_t blocks = (steps + kOccupancyBlock - 1) / kOccupancyBlock;
  std::vector<Block> out(blocks);
  auto run = [&](std::uint64_t b) {
    Block blk{std::vector<std::uint64_t>(cycle, 0), 0};
    CounterRng rng(cfg.seed, kOccupancyStreamBase + b);
    const std::uint64_t len = std::min(kOccupancyBlock, steps - b * kOccupancyBlock);
    std::uint64_t v = 0;
    for (std::uint64_t k = 0; k < len; ++k) {
      v = rng.bernoulli(spec.p) ? (v + 1 == cycle ? 0 : v + 1) : (v == 0 ? cycle - 1 : v - 1);
      ++blk.counts[v];
    }
    blk.shift = v;
    out[b] = std::move(blk);
  };
  const std::uint64_t workers = std::min<std::uint64_t>(cfg.workers, blocks);
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run(b);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t b = w; b < blocks; b += workers) run(b);
      });
  }
  std::vector<std::uint64_t> counts(cycle, 0);
  std::uint64_t origin = 0;
  for (const auto& blk : out) {
    for (std::uint64_t v = 0; v < cycle; ++v) counts[(origin + v) % cycle] += blk.counts[v];
    origin = (origin + blk.shift) % cycle;
  }
  std::vector<double> frac(cycle);
  for (std::uint64_t v = 0; v < cycle; ++v) frac[v] = static_cast<double>(counts[v]) / static_cast<double>(steps);
  return frac;
}

}  // namespace polywalk::sim
