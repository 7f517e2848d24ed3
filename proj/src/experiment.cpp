#include "rfsense/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rfsense/error.hpp"

namespace rfsense {
namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<double> parse_optional(std::string_view field) {
  if (field.empty()) return std::nullopt;
  return std::stod(std::string(field));
}

struct Attempt {
  Assignment point;
  SolveTrace trace;
};

Attempt solve_from_default_start(const SpProblem& problem, const Scene& scene,
                                 const SpOptions& options) {
  const std::optional<Assignment> start = find_feasible_start(problem, scene, options);
  if (!start) throw Infeasible("no feasible start: demands exceed what the power limits allow");
  SpResult r = solve_sp(problem, *start, options);
  return {std::move(r.point), std::move(r.trace)};
}

SolveOutcome finish(const Scene& scene, const ChannelSet& channels, RunConfig config,
                    std::uint64_t seed, Attempt attempt) {
  SolveOutcome out;
  out.row.psi = row_psi(scene);
  out.row.combiner = config.combiner;
  out.row.mode = config.mode;
  out.row.seed = seed;
  out.row.termination = attempt.trace.termination == Termination::Infeasible
                            ? Termination::Converged  // stopped at a feasible point
                            : attempt.trace.termination;
  out.row.iterations = attempt.trace.outer_iterations();
  out.row.objective_linear = attempt.trace.objectives.back();
  out.sinr = achieved_sinr(scene, channels, powers_of(attempt.point, scene.target_count()),
                           alphas_of(attempt.point, scene), config.combiner);
  out.row.sinr_min = *std::min_element(out.sinr.begin(), out.sinr.end());
  out.point = std::move(attempt.point);
  out.trace = std::move(attempt.trace);
  return out;
}

SolveOutcome failure(const Scene& scene, RunConfig config, std::uint64_t seed, Termination t,
                     std::string message) {
  SolveOutcome out;
  out.row.psi = row_psi(scene);
  out.row.combiner = config.combiner;
  out.row.mode = config.mode;
  out.row.seed = seed;
  out.row.termination = t;
  out.trace.termination = t;
  out.message = std::move(message);
  return out;
}

Attempt solve_joint(const Scene& scene, const ChannelSet& channels, const SpOptions& options) {
  const SpProblem joint = build_joint_mrc_problem(scene, channels);

  std::optional<Attempt> best;
  try {
    best = solve_from_default_start(joint, scene, options);
  } catch (const Infeasible&) {
  }

  // The fixed-amplification optimum is feasible for the joint problem; start
  // there too so the joint result never loses to it.
  std::optional<Attempt> fixed;
  try {
    fixed = solve_from_default_start(build_txonly_problem(scene, channels, CombinerScheme::Mrc),
                                     scene, options);
  } catch (const Infeasible&) {
  }
  if (fixed) {
    Assignment start = fixed->point;
    for (int k = 0; k < scene.sensors.sensor_count; ++k) {
      start[amplification(k)] = scene.sensors.alpha_max;
    }
    SpResult r = solve_sp(joint, start, options);
    if (!best || r.trace.objectives.back() < best->trace.objectives.back()) {
      best = Attempt{std::move(r.point), std::move(r.trace)};
    }
  }
  if (!best) throw Infeasible("no feasible start: demands exceed what the power limits allow");
  return std::move(*best);
}

}  // namespace

std::string_view to_string(CombinerScheme c) {
  switch (c) {
    case CombinerScheme::Mrc: return "mrc";
    case CombinerScheme::Zf: return "zf";
    case CombinerScheme::Custom: return "custom";
  }
  return "custom";
}

std::string_view to_string(Mode m) { return m == Mode::Joint ? "joint" : "txonly"; }

CombinerScheme parse_combiner(std::string_view s) {
  if (s == "mrc") return CombinerScheme::Mrc;
  if (s == "zf") return CombinerScheme::Zf;
  throw std::invalid_argument("unknown combiner '" + std::string(s) + "'");
}

Mode parse_mode(std::string_view s) {
  if (s == "joint") return Mode::Joint;
  if (s == "txonly") return Mode::TxOnly;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

Termination parse_termination(std::string_view s) {
  for (Termination t : {Termination::Converged, Termination::MaxIterations, Termination::Infeasible,
                        Termination::RankDeficient, Termination::NumericalFailure}) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown termination '" + std::string(s) + "'");
}

std::optional<double> ResultRow::objective_db() const {
  if (!objective_linear) return std::nullopt;
  return 10.0 * std::log10(*objective_linear);
}

Scene with_uniform_demand(Scene scene, double psi) {
  scene.sinr_demands.assign(scene.target_count(), psi);
  return scene;
}

double row_psi(const Scene& scene) {
  return scene.sinr_demands.empty()
             ? 0.0
             : *std::max_element(scene.sinr_demands.begin(), scene.sinr_demands.end());
}

SolveOutcome run_solve(const Scene& scene, const ChannelSet& channels, RunConfig config,
                       std::uint64_t seed, const SpOptions& options) {
  if (config.mode == Mode::Joint && config.combiner != CombinerScheme::Mrc) {
    throw std::invalid_argument("joint optimization is only defined for the MRC combiner");
  }
  try {
    Attempt attempt = config.mode == Mode::Joint
                          ? solve_joint(scene, channels, options)
                          : solve_from_default_start(
                                build_txonly_problem(scene, channels, config.combiner), scene,
                                options);
    return finish(scene, channels, config, seed, std::move(attempt));
  } catch (const RankDeficient& e) {
    return failure(scene, config, seed, Termination::RankDeficient, e.what());
  } catch (const Infeasible& e) {
    return failure(scene, config, seed, Termination::Infeasible, e.what());
  } catch (const NumericalFailure& e) {
    return failure(scene, config, seed, Termination::NumericalFailure, e.what());
  }
}

SolveOutcome run_trace(const Scene& scene, const ChannelSet& channels, std::uint64_t seed,
                       const SpOptions& options) {
  const RunConfig config{CombinerScheme::Mrc, Mode::Joint};
  try {
    return finish(scene, channels, config, seed,
                  solve_from_default_start(build_joint_mrc_problem(scene, channels), scene, options));
  } catch (const Infeasible& e) {
    return failure(scene, config, seed, Termination::Infeasible, e.what());
  } catch (const NumericalFailure& e) {
    return failure(scene, config, seed, Termination::NumericalFailure, e.what());
  }
}

std::vector<double> psi_grid(double from, double to, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("psi step must be positive");
  if (to < from) throw std::invalid_argument("psi range is empty");
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(from + static_cast<double>(i) * step);
  return out;
}

std::vector<ResultRow> run_sweep(const Scene& scene, const ChannelSet& channels,
                                 std::span<const RunConfig> configs, std::span<const double> psis,
                                 std::uint64_t seed, int jobs, const SpOptions& options) {
  const std::size_t total = psis.size() * configs.size();
  std::vector<ResultRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const double psi = psis[idx / configs.size()];
      const RunConfig config = configs[idx % configs.size()];
      rows[idx] = run_solve(with_uniform_demand(scene, psi), channels, config, seed, options).row;
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::string format_row(const ResultRow& row) {
  std::ostringstream os;
  os << format_number(row.psi) << ',' << to_string(row.combiner) << ',' << to_string(row.mode) << ',';
  if (row.objective_linear) os << format_number(*row.objective_linear);
  os << ',';
  if (const auto db = row.objective_db()) os << format_number(*db);
  os << ',';
  if (row.sinr_min) os << format_number(*row.sinr_min);
  os << ',' << row.iterations << ',' << to_string(row.termination) << ',' << row.seed;
  return os.str();
}

ResultRow parse_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != 9) throw std::invalid_argument("CSV row needs 9 fields");
  ResultRow row;
  row.psi = std::stod(std::string(fields[0]));
  row.combiner = parse_combiner(fields[1]);
  row.mode = parse_mode(fields[2]);
  row.objective_linear = parse_optional(fields[3]);
  row.sinr_min = parse_optional(fields[5]);
  row.iterations = std::stoi(std::string(fields[6]));
  row.termination = parse_termination(fields[7]);
  row.seed = std::stoull(std::string(fields[8]));
  return row;
}

std::string format_trace(const SolveTrace& trace) {
  std::ostringstream os;
  os << "q,objective_db\n";
  for (std::size_t q = 0; q < trace.objectives.size(); ++q) {
    os << q + 1 << ',' << format_number(10.0 * std::log10(trace.objectives[q])) << '\n';
  }
  return os.str();
}

int exit_code(Termination t) {
  switch (t) {
    case Termination::Converged:
    case Termination::MaxIterations: return 0;
    case Termination::Infeasible:
    case Termination::RankDeficient: return 3;
    case Termination::NumericalFailure: return 4;
  }
  return 4;
}

}  // namespace rfsense
