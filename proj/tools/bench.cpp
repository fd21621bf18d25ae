// Benchmark driver: timed throughput runs of the dynamic hull and timed
// static hull instances. Results go to CSV; a summary goes to stderr.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynhull/dynhull.hpp"

using namespace dynhull;
using namespace dynhull::bench;

namespace {

Strategy parse_strategy(const std::string& s) {
  if (s == "coarse") return Strategy::Coarse;
  if (s == "fine") return Strategy::Fine;
  if (s == "finer") return Strategy::Finer;
  throw BenchError("unknown strategy '" + s + "'");
}

ReadMode parse_read_mode(const std::string& s) {
  if (s == "raw") return ReadMode::Raw;
  if (s == "retry") return ReadMode::RetryUntilConsistent;
  if (s == "convexify") return ReadMode::Convexify;
  throw BenchError("unknown read mode '" + s + "'");
}

StaticEngine parse_engine(const std::string& s) {
  if (s == "parallel") return StaticEngine::ParallelCH;
  if (s == "dynamic") return StaticEngine::DynamicCH;
  throw BenchError("unknown engine '" + s + "'");
}

Distribution make_distribution(const std::string& name, std::uint64_t seed) {
  Distribution d;
  d.kind = parse_dist_kind(name);
  d.seed = seed;
  d.validate();
  return d;
}

// "-" means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw BenchError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<Point> load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BenchError("cannot open " + path);
  return read_points(in);
}

void dump_points(const std::string& path, std::span<const Point> pts) {
  std::ofstream out(path);
  if (!out) throw BenchError("cannot open " + path + " for writing");
  write_points(out, pts);
}

struct ThroughputArgs {
  std::vector<std::string> strategies{"finer"};
  std::string mix = "0,50,50";
  std::string dist = "annulus";
  std::vector<unsigned> threads{1};
  double warmup = 2.0;
  double measure = 15.0;
  unsigned reps = 6;
  std::size_t prepop = 1u << 16;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string read_mode = "raw";
  std::string points_file;
  std::string dump;
};

int run_throughput_command(const ThroughputArgs& a) {
  const Distribution dist = make_distribution(a.dist, a.seed);
  std::vector<Point> prepop;
  if (!a.points_file.empty()) prepop = load_points(a.points_file);
  else if (!a.dump.empty()) prepop = sample(dist.with_seed(bench::detail::mix_seed(dist.seed, 0, 0)), a.prepop);
  if (!a.dump.empty()) dump_points(a.dump, prepop);

  Output out(a.out);
  write_throughput_header(out.stream());
  bool audits_ok = true;
  for (const auto& s : a.strategies)
    for (unsigned t : a.threads) {
      BenchRunSpec spec;
      spec.strategy = parse_strategy(s);
      spec.mix = OperationMix::parse(a.mix);
      spec.distribution = dist;
      spec.threads = t;
      spec.warmup_seconds = a.warmup;
      spec.measure_seconds = a.measure;
      spec.repetitions = a.reps;
      spec.prepopulation = prepop.empty() ? a.prepop : prepop.size();
      spec.prepopulation_points = prepop;
      spec.read_mode = parse_read_mode(a.read_mode);
      spec.validate();
      std::vector<double> rates;
      for (unsigned rep = 0; rep < spec.repetitions; ++rep) {
        const RunRecord r = run_throughput_once(spec, rep);
        write_throughput_row(out.stream(), spec, r);
        out.stream().flush();
        rates.push_back(r.ops_per_sec);
        if (!r.audit_ok) {
          audits_ok = false;
          std::cerr << "audit failed: " << r.audit_message << '\n';
        }
      }
      std::cerr << std::left << std::setw(7) << s << " mix " << spec.mix.label() << " " << a.dist << " threads "
                << std::setw(3) << t << std::right << std::fixed << std::setprecision(0) << mean_of(rates)
                << " ops/s +- " << ci95_half_width(rates) << std::defaultfloat << '\n';
    }
  return audits_ok ? 0 : 2;
}

struct StaticArgs {
  std::vector<std::string> engines{"parallel", "dynamic"};
  std::string dist = "circle";
  std::vector<std::string> sizes{"1000000"};
  unsigned threads = 1;
  unsigned reps = 10;
  unsigned instances = 1;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string points_file;
  std::string dump;
};

std::vector<std::size_t> parse_sizes(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const auto& s : items) {
    if (s == "sweep") {
      const auto sweep = static_sweep_sizes();
      out.insert(out.end(), sweep.begin(), sweep.end());
      continue;
    }
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw BenchError("bad size '" + s + "'");
    }
    double scale = 1;
    const std::string suffix = s.substr(pos);
    if (suffix == "k") scale = 1e3;
    else if (suffix == "m") scale = 1e6;
    else if (!suffix.empty()) throw BenchError("bad size '" + s + "'");
    if (!(v * scale >= 1)) throw BenchError("size must be at least 1");
    out.push_back(static_cast<std::size_t>(v * scale));
  }
  return out;
}

int run_static_command(const StaticArgs& a) {
  const Distribution dist = make_distribution(a.dist, a.seed);
  std::vector<std::vector<Point>> instances;
  if (!a.points_file.empty()) {
    instances.push_back(load_points(a.points_file));
    if (instances.back().empty()) throw BenchError(a.points_file + " holds no points");
  } else {
    for (std::size_t n : parse_sizes(a.sizes))
      for (unsigned i = 0; i < a.instances; ++i)
        instances.push_back(sample(dist.with_seed(bench::detail::mix_seed(a.seed, n, i)), n));
  }
  if (!a.dump.empty()) {
    if (instances.size() == 1) dump_points(a.dump, instances[0]);
    else
      for (std::size_t i = 0; i < instances.size(); ++i)
        dump_points(a.dump + "." + std::to_string(instances[i].size()) + "." + std::to_string(i % a.instances),
                    instances[i]);
  }

  Output out(a.out);
  write_static_header(out.stream());
  bool all_match = true;
  std::size_t i = 0;
  while (i < instances.size()) {
    const std::size_t n = instances[i].size();
    std::size_t j = i;
    while (j < instances.size() && instances[j].size() == n) ++j;
    for (const auto& e : a.engines) {
      const StaticEngine engine = parse_engine(e);
      std::vector<double> times;
      unsigned rep = 0;
      for (std::size_t k = i; k < j; ++k) {
        const Hull expected = oracle::hull(instances[k]);
        for (unsigned r = 0; r < a.reps; ++r, ++rep) {
          const StaticRunResult res = run_static(instances[k], engine, a.threads, &expected);
          write_static_row(out.stream(), engine, dist.kind, n, a.threads, rep, res);
          out.stream().flush();
          times.push_back(res.seconds);
          all_match = all_match && res.oracle_match;
        }
      }
      std::cerr << std::left << std::setw(9) << e << std::right << " n " << std::setw(9) << n << " threads "
                << a.threads << "  " << std::fixed << std::setprecision(4) << mean_of(times) << " s +- "
                << ci95_half_width(times) << std::defaultfloat << '\n';
    }
    i = j;
  }
  if (!all_match) std::cerr << "some hulls did not match the oracle\n";
  return all_match ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic convex hull benchmarks"};
  app.require_subcommand(1);

  ThroughputArgs ta;
  auto* tp = app.add_subcommand("throughput", "timed operation-mix runs against the dynamic hull");
  tp->add_option("--strategy", ta.strategies, "coarse, fine or finer (comma list)")->delimiter(',');
  tp->add_option("--mix", ta.mix, "read,insert,delete percentages");
  tp->add_option("--dist", ta.dist, "square, circle or annulus");
  tp->add_option("--threads", ta.threads, "thread counts (comma list)")->delimiter(',');
  tp->add_option("--warmup-s", ta.warmup, "warmup seconds per run");
  tp->add_option("--measure-s", ta.measure, "measured seconds per run");
  tp->add_option("--reps", ta.reps, "repetitions per configuration");
  tp->add_option("--prepop", ta.prepop, "points inserted before each run");
  tp->add_option("--seed", ta.seed, "random seed");
  tp->add_option("--out", ta.out, "CSV output path, - for stdout");
  tp->add_option("--read-mode", ta.read_mode, "raw, retry or convexify");
  tp->add_option("--points-file", ta.points_file, "prepopulate from this point file");
  tp->add_option("--dump-points", ta.dump, "write the prepopulation points to this file");

  StaticArgs sa;
  auto* st = app.add_subcommand("static", "timed hulls of static instances");
  st->add_option("--engine", sa.engines, "parallel or dynamic (comma list)")->delimiter(',');
  st->add_option("--dist", sa.dist, "square, circle or annulus");
  st->add_option("--n", sa.sizes, "instance sizes (comma list, k/m suffixes, or 'sweep')")->delimiter(',');
  st->add_option("--threads", sa.threads, "worker threads");
  st->add_option("--reps", sa.reps, "timed runs per instance");
  st->add_option("--instances", sa.instances, "instances per size");
  st->add_option("--seed", sa.seed, "random seed");
  st->add_option("--out", sa.out, "CSV output path, - for stdout");
  st->add_option("--points-file", sa.points_file, "use the instance in this point file");
  st->add_option("--dump-points", sa.dump, "write generated instances to this path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (tp->parsed()) return run_throughput_command(ta);
    return run_static_command(sa);
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
}
