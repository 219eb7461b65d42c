// Command-line harness: `bench` tunes analytic test functions through the
// caller-defined cost path, `rbgs` runs the red-black Gauss-Seidel demo
// with its loop chunk size tuned live, fixed, or ahead of the main loop.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "autotune/csa.hpp"
#include "autotune/errors.hpp"
#include "autotune/nelder_mead.hpp"
#include "autotune/rbgs.hpp"
#include "autotune/session.hpp"
#include "trace_writer.hpp"

namespace {

using namespace autotune;
using cli::OutputFormat;
using cli::TraceWriter;

struct CommonConfig {
  std::string optimizer = "csa";
  double lower = 0.0;
  double upper = 0.0;
  int ignore = 0;
  int num_opt = 4;
  int max_iter = 0;
  double nm_error = 1e-6;
  std::uint64_t seed = 42;
  bool random_seed = false;
  std::string output = "csv";
  std::string output_path = "-";
};

struct BenchConfig : CommonConfig {
  std::string function = "sphere";
  int dim = 2;
  BenchConfig() {
    lower = -5.0;
    upper = 5.0;
    max_iter = 100;
  }
};

struct RbgsConfig : CommonConfig {
  int threads = 4;
  int n = 128;
  double tol = 1e-8;
  int max_sweeps = 10000;
  std::string chunks_mode = "single";
  std::string tuned_mode = "entire";
  std::optional<int> fixed_chunk;
  RbgsConfig() {
    lower = 1.0;
    upper = 0.0;  // 0 means "use n"
    ignore = 1;
    max_iter = 10;
  }
};

void add_common_flags(CLI::App& cmd, CommonConfig& cfg) {
  cmd.add_option("--optimizer", cfg.optimizer, "Optimizer: csa or nm")
      ->check(CLI::IsMember({"csa", "nm"}));
  cmd.add_option("--lower", cfg.lower, "Lower search bound");
  cmd.add_option("--upper", cfg.upper, "Upper search bound");
  cmd.add_option("--ignore", cfg.ignore, "Warm-up executions discarded per candidate");
  cmd.add_option("--num-opt", cfg.num_opt, "Coupled annealers (csa only)");
  cmd.add_option("--max-iter", cfg.max_iter, "Optimizer iteration budget");
  cmd.add_option("--nm-error", cfg.nm_error, "Nelder-Mead cost-spread stop (nm only)");
  cmd.add_option("--seed", cfg.seed, "Random seed (fixed default keeps runs reproducible)");
  cmd.add_flag("--random-seed", cfg.random_seed, "Draw the seed from system entropy");
  cmd.add_option("--output", cfg.output, "Trace format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--output-path", cfg.output_path, "Trace destination ('-' = stdout)");
}

std::unique_ptr<Optimizer> make_optimizer(const CommonConfig& cfg, int dim) {
  if (cfg.optimizer == "nm") {
    return std::make_unique<NelderMead>(dim, cfg.nm_error, cfg.max_iter, cfg.seed);
  }
  return std::make_unique<Csa>(dim, cfg.num_opt, cfg.max_iter, cfg.seed);
}

double evaluate_function(const std::string& name, std::span<const double> x) {
  if (name == "sphere") {
    double s = 0.0;
    for (double c : x) s += c * c;
    return s;
  }
  if (name == "rosenbrock") {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = 1.0 - x[i];
      s += 100.0 * a * a + b * b;
    }
    return s;
  }
  // rastrigin
  double s = 10.0 * static_cast<double>(x.size());
  for (double c : x) s += c * c - 10.0 * std::cos(2.0 * std::numbers::pi * c);
  return s;
}

std::string join_values(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += cli::format_value(values[i]);
  }
  return out;
}

// Trace goes to --output-path (or stdout); the summary always goes to stdout.
class TraceOutput {
public:
  explicit TraceOutput(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) {
        throw config_error("cannot open output path: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

void resolve_seed(CommonConfig& cfg) {
  if (cfg.random_seed) {
    cfg.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^
               std::random_device{}();
  }
}

int run_bench(BenchConfig cfg) {
  resolve_seed(cfg);
  if (cfg.function == "rosenbrock" && cfg.dim < 2) {
    throw config_error("rosenbrock requires --dim >= 2");
  }
  TraceOutput out(cfg.output_path);
  TraceWriter writer(out.stream(),
                     cfg.output == "csv" ? OutputFormat::csv : OutputFormat::json,
                     cfg.dim);

  SessionOptions options;
  options.kind = PointKind::reals;
  options.trace = [&](const TraceRecord& record) { writer.write(record); };
  TuningSession session(cfg.lower, cfg.upper, cfg.ignore, make_optimizer(cfg, cfg.dim),
                        std::move(options));

  std::vector<double> point(cfg.dim);
  session.exec(std::span<double>(point), 0.0);  // first cost is discarded
  while (!session.finished()) {
    session.exec(std::span<double>(point), evaluate_function(cfg.function, point));
  }
  out.stream().flush();

  std::cout << "summary optimizer=" << cfg.optimizer << " function=" << cfg.function
            << " seed=" << cfg.seed << " evals=" << session.fed_samples()
            << " final_point=" << join_values(session.rendered_point())
            << " final_cost=" << cli::format_value(session.best_cost()) << "\n";
  return 0;
}

int run_rbgs(RbgsConfig cfg) {
  resolve_seed(cfg);
  if (cfg.upper == 0.0) cfg.upper = cfg.n;
  const int dim = cfg.chunks_mode == "dual" ? 2 : 1;

  rbgs::Grid grid(cfg.n, 0.0, 1.0);
  ThreadTeam team(cfg.threads);

  TraceOutput out(cfg.output_path);
  TraceWriter writer(out.stream(),
                     cfg.output == "csv" ? OutputFormat::csv : OutputFormat::json, dim);

  rbgs::TunedSolveResult result;
  if (cfg.tuned_mode == "fixed") {
    if (!cfg.fixed_chunk) {
      throw config_error("--tuned-mode fixed requires --fixed-chunk");
    }
    const auto t0 = std::chrono::steady_clock::now();
    result.solve = rbgs::solve(grid, team, rbgs::ChunkConfig::uniform(*cfg.fixed_chunk),
                               cfg.tol, cfg.max_sweeps);
    result.main_loop_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
    result.chunks = {*cfg.fixed_chunk};
  } else {
    SessionOptions options;
    options.kind = PointKind::integers;
    options.trace = [&](const TraceRecord& record) { writer.write(record); };
    TuningSession session(cfg.lower, cfg.upper, cfg.ignore, make_optimizer(cfg, dim),
                          std::move(options));
    result = cfg.tuned_mode == "entire"
                 ? rbgs::solve_tuned_entire(grid, team, session, cfg.tol, cfg.max_sweeps)
                 : rbgs::solve_tuned_single(grid, team, session, cfg.tol, cfg.max_sweeps);
  }
  out.stream().flush();

  std::string chunks;
  for (std::size_t i = 0; i < result.chunks.size(); ++i) {
    if (i) chunks += ',';
    chunks += std::to_string(result.chunks[i]);
  }
  std::cout << "summary mode=" << cfg.tuned_mode << " n=" << cfg.n
            << " threads=" << cfg.threads << " chunks=" << chunks
            << " sweeps=" << result.solve.sweeps
            << " final_diff=" << cli::format_value(result.solve.final_diff)
            << " target_execs=" << result.tuning_execs << " main_loop_seconds="
            << cli::format_value(result.main_loop_seconds) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime parameter auto-tuning harness"};
  app.require_subcommand(1);

  BenchConfig bench_cfg;
  CLI::App* bench = app.add_subcommand("bench", "Tune an analytic test function");
  add_common_flags(*bench, bench_cfg);
  bench->add_option("--function", bench_cfg.function, "Cost function")
      ->check(CLI::IsMember({"sphere", "rosenbrock", "rastrigin"}));
  bench->add_option("--dim", bench_cfg.dim, "Problem dimension")
      ->check(CLI::PositiveNumber);

  RbgsConfig rbgs_cfg;
  CLI::App* rbgs_cmd = app.add_subcommand("rbgs", "Red-black Gauss-Seidel chunk tuning");
  add_common_flags(*rbgs_cmd, rbgs_cfg);
  rbgs_cmd->add_option("--threads", rbgs_cfg.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  rbgs_cmd->add_option("--n", rbgs_cfg.n, "Interior grid size per side")
      ->check(CLI::PositiveNumber);
  rbgs_cmd->add_option("--tol", rbgs_cfg.tol, "Convergence threshold on diff/n^2");
  rbgs_cmd->add_option("--max-sweeps", rbgs_cfg.max_sweeps, "Sweep cap")
      ->check(CLI::PositiveNumber);
  rbgs_cmd->add_option("--chunks-mode", rbgs_cfg.chunks_mode,
                       "single: one chunk for both loops; dual: tune separately")
      ->check(CLI::IsMember({"single", "dual"}));
  rbgs_cmd->add_option("--tuned-mode", rbgs_cfg.tuned_mode, "entire, single or fixed")
      ->check(CLI::IsMember({"entire", "single", "fixed"}));
  int fixed_chunk_value = 0;
  CLI::Option* fixed_opt =
      rbgs_cmd->add_option("--fixed-chunk", fixed_chunk_value, "Chunk for fixed mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bench->parsed()) return run_bench(bench_cfg);
    if (fixed_opt->count() > 0) rbgs_cfg.fixed_chunk = fixed_chunk_value;
    return run_rbgs(rbgs_cfg);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
