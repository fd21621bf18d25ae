#pragma once

// Point distributions, the throughput harness, the stress harness and the
// static-instance driver used by the bench tool and the acceptance suite.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <iomanip>
#include <sstream>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "dynhull/chain.hpp"
#include "dynhull/geometry.hpp"
#include "dynhull/hull_tree.hpp"
#include "dynhull/oracle.hpp"
#include "dynhull/static_hull.hpp"

namespace dynhull::bench {

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A worker run did not finish in time; most likely a deadlock.
class BenchTimeout : public BenchError {
 public:
  using BenchError::BenchError;
};

// ---------------------------------------------------------------------------
// Distributions

enum class DistKind { Square, Circle, Annulus };

struct Distribution {
  DistKind kind = DistKind::Annulus;
  std::uint64_t seed = 1;
  double side = 10.0;     // square: [0, side]^2
  double radius = 10.0;   // circle: disk of this radius around the origin
  double r_min = 9.999;   // annulus bounds
  double r_max = 10.0;

  static Distribution square(std::uint64_t seed) { return {DistKind::Square, seed}; }
  static Distribution circle(std::uint64_t seed) { return {DistKind::Circle, seed}; }
  static Distribution annulus(std::uint64_t seed) { return {DistKind::Annulus, seed}; }

  Distribution with_seed(std::uint64_t s) const {
    Distribution d = *this;
    d.seed = s;
    return d;
  }

  void validate() const {
    if (!(side > 0) || !(radius > 0)) throw BenchError("distribution extent must be positive");
    if (!(r_min >= 0) || !(r_min < r_max)) throw BenchError("annulus needs 0 <= r_min < r_max");
  }
};

inline const char* to_string(DistKind k) {
  switch (k) {
    case DistKind::Square: return "square";
    case DistKind::Circle: return "circle";
    case DistKind::Annulus: return "annulus";
  }
  return "?";
}

inline DistKind parse_dist_kind(const std::string& s) {
  if (s == "square") return DistKind::Square;
  if (s == "circle") return DistKind::Circle;
  if (s == "annulus") return DistKind::Annulus;
  throw BenchError("unknown distribution '" + s + "'");
}

/// Deterministic stream of points for one distribution and seed.
class PointSampler {
 public:
  explicit PointSampler(const Distribution& d) : dist_(d), rng_(d.seed) { d.validate(); }

  Point next() {
    switch (dist_.kind) {
      case DistKind::Square:
        return {unit_(rng_) * dist_.side, unit_(rng_) * dist_.side};
      case DistKind::Circle:
        return polar(dist_.radius * std::sqrt(unit_(rng_)));
      case DistKind::Annulus: {
        const double lo = dist_.r_min * dist_.r_min, hi = dist_.r_max * dist_.r_max;
        return polar(std::sqrt(lo + unit_(rng_) * (hi - lo)));
      }
    }
    return {};
  }

 private:
  Point polar(double r) {
    const double theta = unit_(rng_) * 2.0 * std::numbers::pi;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  Distribution dist_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// `n` i.i.d. points with pairwise distinct y (a colliding sample is redrawn).
inline std::vector<Point> sample(const Distribution& d, std::size_t n) {
  PointSampler sampler(d);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = sampler.next();
  for (;;) {
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = pts[i].y;
    std::sort(ys.begin(), ys.end());
    std::vector<double> dups;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (ys[i] == ys[i + 1] && (dups.empty() || dups.back() != ys[i])) dups.push_back(ys[i]);
    if (dups.empty()) return pts;
    bool first = true;
    double last = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::binary_search(dups.begin(), dups.end(), pts[i].y)) continue;
      // keep the first occurrence of each duplicated y
      if (first || pts[i].y != last) {
        first = false;
        last = pts[i].y;
        continue;
      }
      pts[i] = sampler.next();
    }
  }
}

// ---------------------------------------------------------------------------
// Operation mixes

struct OperationMix {
  int read = 0;
  int insert = 50;
  int erase = 50;

  void validate() const {
    if (read < 0 || insert < 0 || erase < 0 || read + insert + erase != 100)
      throw BenchError("operation mix must be non-negative and sum to 100");
  }
  std::string label() const {
    return std::to_string(read) + "/" + std::to_string(insert) + "/" + std::to_string(erase);
  }

  /// Parses "R,I,D".
  static OperationMix parse(const std::string& s) {
    OperationMix m;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    std::string rest;
    if (!(in >> m.read >> c1 >> m.insert >> c2 >> m.erase) || c1 != ',' || c2 != ',' || (in >> rest))
      throw BenchError("mix must look like R,I,D (got '" + s + "')");
    m.validate();
    return m;
  }
};

// ---------------------------------------------------------------------------
// Statistics

/// Half-width of the two-sided 95% confidence interval of the mean.
inline double ci95_half_width(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t t(static_cast<double>(n - 1));
  return boost::math::quantile(boost::math::complement(t, 0.025)) * sd / std::sqrt(static_cast<double>(n));
}

inline double mean_of(std::span<const double> xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// ---------------------------------------------------------------------------
// Shared worker machinery

namespace detail {

struct alignas(64) PaddedCount {
  std::atomic<std::uint64_t> value{0};
};

struct WriterLog {
  std::vector<Point> live;            // points this thread owns that should be present
  std::uint64_t erase_false_live = 0; // erase of an owned live point returned false
  std::uint64_t collisions = 0;       // inserts rejected for a shared y
};

struct RunState {
  RunState(Strategy s, HullTreeOptions o) : tree(s, o) {}

  HullTree tree;
  std::atomic<bool> stop{false};
  std::atomic<unsigned> writers_left{0};
  std::vector<PaddedCount> ops;
  std::vector<WriterLog> logs;
  std::mutex done_mutex;
  std::condition_variable done_cv;
  unsigned finished = 0;
  std::uint64_t reads = 0;
  std::uint64_t inconsistent_reads = 0;
  std::uint64_t deletion_regressions = 0;
  std::mutex result_mutex;

  void mark_done() {
    {
      std::lock_guard lk(done_mutex);
      ++finished;
    }
    done_cv.notify_all();
  }

  bool wait_done(unsigned count, std::chrono::duration<double> timeout) {
    std::unique_lock lk(done_mutex);
    return done_cv.wait_for(lk, timeout, [&] { return finished >= count; });
  }

  std::uint64_t total_ops() const {
    std::uint64_t s = 0;
    for (const auto& c : ops) s += c.value.load(std::memory_order_relaxed);
    return s;
  }
};

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

// One writer: performs mix operations until `limit` ops are done (0 = until
// stopped).
inline void writer_loop(RunState& st, unsigned index, const OperationMix& mix, const Distribution& dist,
                        ReadMode read_mode, std::uint64_t limit, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PointSampler sampler(dist.with_seed(seed ^ 0x9e3779b97f4a7c15ULL));
  std::uniform_int_distribution<int> pct(0, 99);
  WriterLog& log = st.logs[index];
  auto& counter = st.ops[index].value;
  std::uint64_t reads = 0, inconsistent = 0;
  for (std::uint64_t i = 0; (limit == 0 || i < limit) && !st.stop.load(std::memory_order_relaxed); ++i) {
    const int r = pct(rng);
    if (r < mix.read) {
      const auto h = st.tree.get_hull(read_mode);
      ++reads;
      if (!h.consistent()) ++inconsistent;
    } else if (r < mix.read + mix.insert) {
      const Point p = sampler.next();
      try {
        if (st.tree.insert(p)) log.live.push_back(p);
      } catch (const GeneralPositionError&) {
        ++log.collisions;
      }
    } else if (log.live.empty()) {
      st.tree.erase(sampler.next());
    } else {
      const std::size_t k = std::uniform_int_distribution<std::size_t>(0, log.live.size() - 1)(rng);
      if (st.tree.erase(log.live[k])) {
        log.live[k] = log.live.back();
        log.live.pop_back();
      } else {
        ++log.erase_false_live;
      }
    }
    counter.store(counter.load(std::memory_order_relaxed) + 1, std::memory_order_relaxed);
  }
  std::lock_guard lk(st.result_mutex);
  st.reads += reads;
  st.inconsistent_reads += inconsistent;
}

struct FinalAudit {
  bool ok = true;
  std::string message;
};

// Quiescent check of the tree against the writers' logs.
inline FinalAudit audit_final(RunState& st) {
  FinalAudit a;
  std::vector<Point> expected;
  std::uint64_t false_live = 0;
  for (const auto& log : st.logs) {
    expected.insert(expected.end(), log.live.begin(), log.live.end());
    false_live += log.erase_false_live;
  }
  auto by_y = [](const Point& p, const Point& q) { return p.y < q.y; };
  std::sort(expected.begin(), expected.end(), by_y);
  auto actual = st.tree.points();
  std::sort(actual.begin(), actual.end(), by_y);
  if (false_live) {
    a.ok = false;
    a.message = std::to_string(false_live) + " erases of live points returned false";
  } else if (actual != expected) {
    a.ok = false;
    a.message = "final point set differs from the logged set (" + std::to_string(actual.size()) + " vs " +
                std::to_string(expected.size()) + " points)";
  } else if (const auto t = st.tree.audit(); !t.ok) {
    a.ok = false;
    a.message = "tree audit: " + t.message;
  } else if (!(st.tree.get_hull(ReadMode::Raw).to_hull() == oracle::hull(expected))) {
    a.ok = false;
    a.message = "final hull differs from the oracle hull";
  }
  return a;
}

inline void prepopulate(RunState& st, std::span<const Point> pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (st.tree.insert(pts[i])) st.logs[i % st.logs.size()].live.push_back(pts[i]);
}

// Waits for `count` workers. On timeout, stops them and throws; threads that
// still do not stop are detached (they keep `st` alive).
inline void join_or_throw(const std::shared_ptr<RunState>& st, std::vector<std::thread>& threads,
                          unsigned count, double timeout_s, const std::string& what) {
  if (st->wait_done(count, std::chrono::duration<double>(timeout_s))) {
    for (auto& t : threads) t.join();
    return;
  }
  st->stop.store(true);
  const bool stopped = st->wait_done(count, std::chrono::seconds(2));
  for (auto& t : threads) stopped ? t.join() : t.detach();
  throw BenchTimeout(what + ": workers did not finish within " + std::to_string(timeout_s) + " s");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Throughput

struct BenchRunSpec {
  Strategy strategy = Strategy::Finer;
  OperationMix mix{0, 50, 50};
  Distribution distribution = Distribution::annulus(1);
  unsigned threads = 1;
  double warmup_seconds = 2.0;
  double measure_seconds = 15.0;
  unsigned repetitions = 6;
  std::size_t prepopulation = 1u << 16;
  ReadMode read_mode = ReadMode::Raw;
  /// Seconds allowed for workers to stop after the measurement window.
  double drain_timeout_seconds = 30.0;
  bool audit = true;
  /// If non-empty, used instead of sampling `prepopulation` points.
  std::vector<Point> prepopulation_points;

  void validate() const {
    mix.validate();
    distribution.validate();
    if (threads < 1) throw BenchError("threads must be at least 1");
    if (!(warmup_seconds >= 0) || !(measure_seconds > 0)) throw BenchError("durations must be positive");
    if (repetitions < 1) throw BenchError("repetitions must be at least 1");
  }
};

struct RunRecord {
  unsigned rep = 0;
  std::uint64_t ops_total = 0;
  double ops_per_sec = 0;
  std::uint64_t retries = 0;
  std::uint64_t early_stops = 0;
  std::uint64_t inconsistent_reads = 0;
  bool audit_ok = true;
  std::string audit_message;
};

struct BenchResult {
  std::vector<RunRecord> runs;
  double mean_ops_per_sec = 0;
  double ci95 = 0;
  bool audits_ok = true;
};

inline RunRecord run_throughput_once(const BenchRunSpec& spec, unsigned rep) {
  auto st = std::make_shared<detail::RunState>(spec.strategy, HullTreeOptions{});
  st->ops = std::vector<detail::PaddedCount>(spec.threads);
  st->logs.resize(spec.threads);
  const Distribution base = spec.distribution.with_seed(detail::mix_seed(spec.distribution.seed, rep, 0));
  if (!spec.prepopulation_points.empty()) detail::prepopulate(*st, spec.prepopulation_points);
  else detail::prepopulate(*st, sample(base, spec.prepopulation));
  st->tree.reset_stats();

  std::vector<std::thread> threads;
  for (unsigned t = 0; t < spec.threads; ++t)
    threads.emplace_back([st, t, mix = spec.mix, base, mode = spec.read_mode, seed = spec.distribution.seed, rep] {
      detail::writer_loop(*st, t, mix, base, mode, 0, detail::mix_seed(seed, rep, t + 1));
      st->mark_done();
    });

  using clock = std::chrono::steady_clock;
  std::this_thread::sleep_for(std::chrono::duration<double>(spec.warmup_seconds));
  const auto c0 = st->total_ops();
  const auto s0 = st->tree.stats();
  const auto t0 = clock::now();
  std::this_thread::sleep_for(std::chrono::duration<double>(spec.measure_seconds));
  const auto c1 = st->total_ops();
  const auto s1 = st->tree.stats();
  const auto t1 = clock::now();
  st->stop.store(true);
  detail::join_or_throw(st, threads, spec.threads, spec.drain_timeout_seconds,
                        std::string("throughput run (") + to_string(spec.strategy) + ")");

  RunRecord r;
  r.rep = rep;
  r.ops_total = c1 - c0;
  r.ops_per_sec = static_cast<double>(r.ops_total) / std::chrono::duration<double>(t1 - t0).count();
  r.retries = s1.retries - s0.retries;
  r.early_stops = s1.early_stops - s0.early_stops;
  r.inconsistent_reads = st->inconsistent_reads;
  if (spec.audit) {
    const auto a = detail::audit_final(*st);
    r.audit_ok = a.ok;
    r.audit_message = a.message;
  }
  return r;
}

/// Timed throughput runs: after the warmup, count operations completed by
/// all workers during the measurement window. Each repetition starts from a
/// freshly prepopulated tree.
inline BenchResult run_throughput(const BenchRunSpec& spec) {
  spec.validate();
  BenchResult res;
  std::vector<double> rates;
  for (unsigned rep = 0; rep < spec.repetitions; ++rep) {
    res.runs.push_back(run_throughput_once(spec, rep));
    rates.push_back(res.runs.back().ops_per_sec);
    res.audits_ok = res.audits_ok && res.runs.back().audit_ok;
  }
  res.mean_ops_per_sec = mean_of(rates);
  res.ci95 = ci95_half_width(rates);
  return res;
}

inline void write_throughput_header(std::ostream& os) {
  os << "strategy,mix,dist,threads,rep,ops_total,ops_per_sec,retries,early_stops\n";
}

inline void write_throughput_row(std::ostream& os, const BenchRunSpec& spec, const RunRecord& r) {
  os << to_string(spec.strategy) << ',' << spec.mix.label() << ',' << to_string(spec.distribution.kind) << ','
     << spec.threads << ',' << r.rep << ',' << r.ops_total << ',' << std::fixed << std::setprecision(1)
     << r.ops_per_sec << std::defaultfloat << ',' << r.retries << ',' << r.early_stops << '\n';
}

// ---------------------------------------------------------------------------
// Stress

struct StressSpec {
  Strategy strategy = Strategy::Finer;
  OperationMix mix{0, 50, 50};
  Distribution distribution = Distribution::annulus(7);
  unsigned writer_threads = 8;
  std::uint64_t ops_per_writer = 125000;
  std::size_t prepopulation = 1024;
  unsigned reader_threads = 0;
  ReadMode reader_mode = ReadMode::RetryUntilConsistent;
  double timeout_seconds = 60.0;
  /// Sample node deletion flags concurrently (retains every node).
  bool observe_deletions = false;
  bool audit_merge_order = true;
};

struct StressReport {
  std::uint64_t writer_ops = 0;
  std::uint64_t reads = 0;                // by dedicated readers
  std::uint64_t inconsistent_reads = 0;   // returned hulls failing the endpoint check
  std::uint64_t deletion_regressions = 0; // deleted flags observed going back to false
  double seconds = 0;
  HullTreeStats stats;
  bool audit_ok = false;
  std::string audit_message;
  std::size_t final_points = 0;
};

/// Fixed-count concurrent run followed by a quiescent audit. Throws
/// BenchTimeout if the workers do not finish within the timeout.
inline StressReport run_stress(const StressSpec& spec) {
  spec.mix.validate();
  HullTreeOptions opts;
  opts.retain_nodes = spec.observe_deletions;
  opts.audit_merge_order = spec.audit_merge_order;
  auto st = std::make_shared<detail::RunState>(spec.strategy, opts);
  st->ops = std::vector<detail::PaddedCount>(spec.writer_threads);
  st->logs.resize(spec.writer_threads);
  detail::prepopulate(*st, sample(spec.distribution, spec.prepopulation));

  st->writers_left.store(spec.writer_threads);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::thread> threads;
  const unsigned total = spec.writer_threads + spec.reader_threads + (spec.observe_deletions ? 1u : 0u);
  for (unsigned t = 0; t < spec.writer_threads; ++t)
    threads.emplace_back([st, t, spec] {
      detail::writer_loop(*st, t, spec.mix, spec.distribution, spec.reader_mode, spec.ops_per_writer,
                          detail::mix_seed(spec.distribution.seed, 0, t + 1));
      st->writers_left.fetch_sub(1);
      st->mark_done();
    });
  for (unsigned t = 0; t < spec.reader_threads; ++t)
    threads.emplace_back([st, spec] {
      std::uint64_t reads = 0, bad = 0;
      while (st->writers_left.load() > 0 && !st->stop.load(std::memory_order_relaxed)) {
        const auto h = st->tree.get_hull(spec.reader_mode);
        ++reads;
        if (!h.consistent()) ++bad;
      }
      {
        std::lock_guard lk(st->result_mutex);
        st->reads += reads;
        st->inconsistent_reads += bad;
      }
      st->mark_done();
    });
  if (spec.observe_deletions)
    threads.emplace_back([st] {
      std::vector<bool> prev;
      std::uint64_t regressions = 0;
      while (st->writers_left.load() > 0 && !st->stop.load(std::memory_order_relaxed)) {
        auto now = st->tree.deletion_flags();
        for (std::size_t i = 0; i < prev.size(); ++i)
          if (prev[i] && !now[i]) ++regressions;
        prev = std::move(now);
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
      {
        std::lock_guard lk(st->result_mutex);
        st->deletion_regressions += regressions;
      }
      st->mark_done();
    });
  detail::join_or_throw(st, threads, total, spec.timeout_seconds,
                        std::string("stress run (") + to_string(spec.strategy) + ")");

  StressReport rep;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.writer_ops = st->total_ops();
  rep.stats = st->tree.stats();
  {
    std::lock_guard lk(st->result_mutex);
    rep.reads = st->reads;
    rep.inconsistent_reads = st->inconsistent_reads;
    rep.deletion_regressions = st->deletion_regressions;
  }
  const auto a = detail::audit_final(*st);
  rep.audit_ok = a.ok;
  rep.audit_message = a.message;
  rep.final_points = st->tree.size();
  return rep;
}

// ---------------------------------------------------------------------------
// Static instances

enum class StaticEngine { ParallelCH, DynamicCH };

inline const char* to_string(StaticEngine e) { return e == StaticEngine::ParallelCH ? "parallel" : "dynamic"; }

struct StaticRunResult {
  Hull hull;
  double seconds = 0;
  bool oracle_match = false;
};

/// Hull of a static instance. ParallelCH runs the fork-join divide and
/// conquer; DynamicCH streams the points through `threads` workers that
/// insert each point not already inside the current hull of a Finer tree.
/// `expected`, when given, is compared with the result.
inline StaticRunResult run_static(std::span<const Point> pts, StaticEngine engine, unsigned threads,
                                  const Hull* expected = nullptr) {
  if (pts.empty()) throw BenchError("static run needs at least one point");
  threads = std::max(threads, 1u);
  StaticRunResult r;
  const auto t0 = std::chrono::steady_clock::now();
  if (engine == StaticEngine::ParallelCH) {
    r.hull = static_hull_parallel(pts, StaticHullConfig{2000, threads});
  } else {
    HullTree tree(Strategy::Finer);
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (pts.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&, t] {
        try {
          const std::size_t lo = std::min(pts.size(), t * chunk), hi = std::min(pts.size(), lo + chunk);
          for (std::size_t i = lo; i < hi; ++i)
            if (!tree.contains(pts[i])) tree.insert(pts[i]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    r.hull = tree.get_hull(ReadMode::Convexify).to_hull();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.oracle_match = expected ? r.hull == *expected : false;
  return r;
}

inline void write_static_header(std::ostream& os) {
  os << "engine,dist,n,threads,rep,seconds,hull_size,oracle_match\n";
}

inline void write_static_row(std::ostream& os, StaticEngine e, DistKind d, std::size_t n, unsigned threads,
                             unsigned rep, const StaticRunResult& r) {
  os << to_string(e) << ',' << to_string(d) << ',' << n << ',' << threads << ',' << rep << ',' << std::fixed
     << std::setprecision(6) << r.seconds << std::defaultfloat << ',' << r.hull.vertex_count() << ','
     << (r.oracle_match ? "true" : "false") << '\n';
}

/// Instance sizes of the static sweep: 125k doubling up to 16m.
inline std::vector<std::size_t> static_sweep_sizes() {
  std::vector<std::size_t> v;
  for (std::size_t n = 125000; n <= 16000000; n *= 2) v.push_back(n);
  return v;
}

}  // namespace dynhull::bench
