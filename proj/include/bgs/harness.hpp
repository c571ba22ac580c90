#pragma once

#include "bgs/assumptions.hpp"
#include "bgs/bounds.hpp"
#include "bgs/drivers.hpp"
#include "bgs/generators.hpp"
#include "bgs/matrix.hpp"
#include "bgs/norms.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bgs::harness {

enum class Method { cgs, mgs, cgs2, bcgs, bcgs2, householder };
enum class Generator { svd, lauchli, hilbert, file };
enum class Policy { strict, warn };

inline std::string_view to_string(Method m)
{
  switch (m) {
  case Method::cgs: return "cgs";
  case Method::mgs: return "mgs";
  case Method::cgs2: return "cgs2";
  case Method::bcgs: return "bcgs";
  case Method::bcgs2: return "bcgs2";
  case Method::householder: return "householder";
  }
  return "?";
}

inline Method parse_method(std::string_view s)
{
  for (Method m : {Method::cgs, Method::mgs, Method::cgs2, Method::bcgs, Method::bcgs2, Method::householder})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

inline Generator parse_generator(std::string_view s)
{
  if (s == "svd" || s == "svd-spectrum") return Generator::svd;
  if (s == "lauchli") return Generator::lauchli;
  if (s == "hilbert" || s == "hilbert-like") return Generator::hilbert;
  if (s == "file") return Generator::file;
  throw std::invalid_argument("unknown generator '" + std::string(s) + "'");
}

inline Policy parse_policy(std::string_view s)
{
  if (s == "strict") return Policy::strict;
  if (s == "warn") return Policy::warn;
  throw std::invalid_argument("unknown policy '" + std::string(s) + "'");
}

inline bool is_blocked(Method m) { return m == Method::bcgs || m == Method::bcgs2; }
inline bool is_reorthogonalized(Method m) { return m == Method::cgs2 || m == Method::bcgs2; }

struct ExperimentConfig {
  Method method = Method::bcgs2;
  std::size_t m = 100;
  std::size_t n = 20;
  /// Uniform block width for bcgs / bcgs2; defaults to min(8, n).
  std::optional<std::size_t> block_width;
  /// Explicit partition; overrides block_width.
  std::optional<BlockPartition> blocks;
  Generator generator = Generator::svd;
  double kappa = 1e8;
  /// Diagonal value for the Lauchli generator.
  double lauchli_eps = 1e-8;
  std::uint64_t seed = 1;
  Policy policy = Policy::warn;
  std::size_t trials = 1;
  /// Matrix for Generator::file.
  std::optional<Matrix> input;
  /// When false, wall_time_seconds is reported as 0 so output is reproducible.
  bool record_timing = true;
  /// Assert the orthogonality and residual contracts on every qualifying row.
  bool test_mode = false;
  /// Worker cap; 0 means BGS_THREADS or the hardware concurrency.
  std::size_t threads = 0;
  DriverOptions driver;

  void validate() const
  {
    if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
    if (!(kappa >= 1.0)) throw std::invalid_argument("config: kappa must be >= 1");
    if (!is_blocked(method) && (blocks || block_width.value_or(1) != 1)) {
      throw std::invalid_argument("config: method " + std::string(to_string(method)) +
                                  " is column-oriented; block widths only apply to bcgs and bcgs2");
    }
    if (generator == Generator::file && !input) throw std::invalid_argument("config: generator 'file' needs an input matrix");
    if (generator != Generator::file && generator != Generator::lauchli) {
      if (n == 0 || n > m) throw std::invalid_argument("config: need 1 <= n <= m");
    }
    if (generator == Generator::lauchli && n == 0) throw std::invalid_argument("config: need n >= 1");
    if (block_width && *block_width == 0) throw std::invalid_argument("config: block width must be >= 1");
  }
};

struct ReportRow {
  std::size_t trial = 0;
  std::string method;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t p = 0;
  double kappa_measured = 0.0;
  double defect = 0.0;
  double rel_residual = 0.0;
  bool assumptions_passed = false;
  double wall_time_seconds = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Strict-policy abort: an assumption verdict failed on block `block`.
class AssumptionFailure : public std::runtime_error {
public:
  AssumptionFailure(const std::string& what, std::size_t trial, std::size_t block)
      : std::runtime_error(what), trial_(trial), block_(block)
  {
  }
  std::size_t trial() const noexcept { return trial_; }
  std::size_t block() const noexcept { return block_; }

private:
  std::size_t trial_;
  std::size_t block_;
};

/// Test-mode failure: a run with passing assumptions broke a proven bound.
class ContractViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Matrix used by trial `trial`. Random generators use seed + trial.
inline Matrix make_matrix(const ExperimentConfig& cfg, std::size_t trial)
{
  switch (cfg.generator) {
  case Generator::svd: return gen_svd_spectrum(cfg.m, cfg.n, cfg.kappa, cfg.seed + trial);
  case Generator::lauchli: return gen_lauchli(cfg.n, cfg.lauchli_eps);
  case Generator::hilbert: return gen_hilbert_like(cfg.m, cfg.n);
  case Generator::file: return *cfg.input;
  }
  throw std::logic_error("make_matrix: unreachable");
}

inline BlockPartition partition_for(const ExperimentConfig& cfg, std::size_t n)
{
  if (!is_blocked(cfg.method)) return BlockPartition(std::vector<std::size_t>(n, 1));
  if (cfg.blocks) {
    cfg.blocks->require_sums_to(n);
    return *cfg.blocks;
  }
  return BlockPartition::uniform(n, std::min(cfg.block_width.value_or(8), n));
}

inline FactorizationTrace factor(Method method, const Matrix& a, const BlockPartition& blocks, DriverOptions opts)
{
  switch (method) {
  case Method::cgs: return cgs(a, opts);
  case Method::mgs: return mgs(a, opts);
  case Method::cgs2: return cgs2(a, opts);
  case Method::bcgs: return bcgs(a, blocks, opts);
  case Method::bcgs2: return bcgs2(a, blocks, opts);
  case Method::householder: return householder(a, opts);
  }
  throw std::logic_error("factor: unreachable");
}

namespace detail {

inline std::string describe_failure(const bounds::AssumptionVerdict& v)
{
  std::ostringstream os;
  os << "assumption failure at block " << v.block_index << ": check A failed (" << sci(v.check_a.lhs) << " > "
     << sci(v.check_a.rhs) << ") and check B failed (" << sci(v.check_b.lhs) << " > " << sci(v.check_b.rhs) << ")";
  return os.str();
}

} // namespace detail

/// Runs one trial. Throws AssumptionFailure under the strict policy,
/// ContractViolation in test mode, BreakdownError on hard breakdown.
inline ReportRow run_trial(const ExperimentConfig& cfg, std::size_t trial)
{
  const Matrix a = make_matrix(cfg, trial);
  const auto start = std::chrono::steady_clock::now();
  const FactorizationTrace trace = factor(cfg.method, a, partition_for(cfg, a.cols()), cfg.driver);
  const auto stop = std::chrono::steady_clock::now();
  const BlockPartition& blocks = trace.partition;
  const std::size_t p = blocks.max_width();

  ReportRow row;
  row.trial = trial;
  row.method = std::string(to_string(cfg.method));
  row.m = a.rows();
  row.n = a.cols();
  row.p = p;
  row.kappa_measured = condition_number(a);
  row.defect = orthogonality_defect(trace.factorization.q());
  row.rel_residual = relative_residual(a, trace.factorization).value;
  row.wall_time_seconds = cfg.record_timing ? std::chrono::duration<double>(stop - start).count() : 0.0;

  const bounds::BoundContext ctx(a.rows(), p);
  const auto verdicts = bounds::check_assumptions(trace, ctx);
  row.assumptions_passed = bounds::all_passed(verdicts);

  if (is_reorthogonalized(cfg.method)) {
    if (cfg.policy == Policy::strict) {
      for (const auto& v : verdicts) {
        if (!v.either_passed) {
          throw AssumptionFailure("trial " + std::to_string(trial) + ": " + detail::describe_failure(v), trial,
                                  v.block_index);
        }
      }
    }
    if (cfg.test_mode && row.assumptions_passed) {
      const std::size_t s = blocks.blocks();
      const std::size_t t_last = (s - 1) * p;
      const double defect_bound = 10.0 * ctx.eps() * bounds::f1(row.m, t_last, p, ctx);
      const double resid_bound = 10.0 * ctx.eps() * bounds::f2(row.m, t_last, p, s, ctx);
      if (!(row.defect <= defect_bound) || !(row.rel_residual <= resid_bound)) {
        throw ContractViolation("trial " + std::to_string(trial) + ": defect " + sci(row.defect) + " (bound " +
                                sci(defect_bound) + "), residual " + sci(row.rel_residual) + " (bound " +
                                sci(resid_bound) + ")");
      }
    }
  }
  return row;
}

/// Worker count: explicit request, else BGS_THREADS, else hardware, capped
/// by the number of trials.
inline std::size_t worker_count(std::size_t requested, std::size_t trials)
{
  std::size_t n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("BGS_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) n = static_cast<std::size_t>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, trials));
}

/// Runs every trial; rows come back in trial order regardless of which
/// worker finished first. If any trial throws, the exception from the
/// lowest-numbered failing trial is rethrown after all workers stop.
inline std::vector<ReportRow> run(const ExperimentConfig& cfg)
{
  cfg.validate();
  std::vector<std::optional<ReportRow>> slots(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < cfg.trials; i = next++) {
      try {
        slots[i] = run_trial(cfg, i);
      }
      catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers = worker_count(cfg.threads, cfg.trials);
  if (workers == 1) {
    work();
  }
  else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ReportRow> rows;
  rows.reserve(cfg.trials);
  for (auto& s : slots) rows.push_back(std::move(*s));
  return rows;
}

inline constexpr std::string_view kCsvHeader =
    "trial,method,m,n,p,kappa_measured,defect,rel_residual,assumptions_passed,wall_time_seconds";

namespace detail {
inline std::string g17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace detail

inline void emit_csv(const std::vector<ReportRow>& rows, std::ostream& out)
{
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.trial << ',' << r.method << ',' << r.m << ',' << r.n << ',' << r.p << ','
        << detail::g17(r.kappa_measured) << ',' << detail::g17(r.defect) << ',' << detail::g17(r.rel_residual) << ','
        << (r.assumptions_passed ? "true" : "false") << ',' << detail::g17(r.wall_time_seconds) << '\n';
  }
}

inline void emit_csv(const std::vector<ReportRow>& rows, const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "'");
  emit_csv(rows, out);
  if (!out) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

inline std::vector<ReportRow> parse_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("parse_csv: missing or unexpected header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 10) throw std::runtime_error("parse_csv: expected 10 fields in '" + line + "'");
    ReportRow r;
    r.trial = std::stoul(f[0]);
    r.method = f[1];
    r.m = std::stoul(f[2]);
    r.n = std::stoul(f[3]);
    r.p = std::stoul(f[4]);
    r.kappa_measured = std::strtod(f[5].c_str(), nullptr);
    r.defect = std::strtod(f[6].c_str(), nullptr);
    r.rel_residual = std::strtod(f[7].c_str(), nullptr);
    r.assumptions_passed = f[8] == "true";
    r.wall_time_seconds = std::strtod(f[9].c_str(), nullptr);
    rows.push_back(std::move(r));
  }
  return rows;
}

/// (kappa_measured, defect) pairs, one series per method in order of first
/// appearance, each introduced by a "# method" comment and separated from
/// the next by a blank line.
inline void emit_plotdata(const std::vector<ReportRow>& rows, std::ostream& out)
{
  std::vector<std::string> methods;
  for (const auto& r : rows)
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i > 0) out << '\n';
    out << "# " << methods[i] << '\n';
    for (const auto& r : rows)
      if (r.method == methods[i]) out << detail::g17(r.kappa_measured) << ' ' << detail::g17(r.defect) << '\n';
  }
}

inline void emit_plotdata(const std::vector<ReportRow>& rows, const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plotdata: cannot open '" + path + "'");
  emit_plotdata(rows, out);
  if (!out) throw std::runtime_error("emit_plotdata: write to '" + path + "' failed");
}

} // namespace bgs::harness
