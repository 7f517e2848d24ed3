#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfsense/problems.hpp"
#include "rfsense/scene.hpp"
#include "rfsense/signal_chain.hpp"
#include "rfsense/sp_solver.hpp"

namespace rfsense {

enum class Mode { Joint, TxOnly };

struct RunConfig {
  CombinerScheme combiner = CombinerScheme::Mrc;
  Mode mode = Mode::Joint;
};

std::string_view to_string(CombinerScheme c);
std::string_view to_string(Mode m);
CombinerScheme parse_combiner(std::string_view s);
Mode parse_mode(std::string_view s);
Termination parse_termination(std::string_view s);

/// One CSV record. Objective and SINR fields are empty for failed solves.
struct ResultRow {
  double psi = 0.0;
  CombinerScheme combiner = CombinerScheme::Mrc;
  Mode mode = Mode::Joint;
  std::optional<double> objective_linear;
  std::optional<double> sinr_min;
  int iterations = 0;
  Termination termination = Termination::Converged;
  std::uint64_t seed = 0;

  std::optional<double> objective_db() const;
};

struct SolveOutcome {
  ResultRow row;
  Assignment point;             ///< empty when no feasible point was found
  std::vector<double> sinr;     ///< achieved per-target SINR at `point`
  SolveTrace trace;
  std::string message;          ///< diagnostics for failed solves
};

/// Scene copy with every target's demand set to `psi`.
Scene with_uniform_demand(Scene scene, double psi);

/// Largest demand of the scene (the `psi` column of a row).
double row_psi(const Scene& scene);

/// Solves one configuration. Joint mode requires MRC. The joint problem is
/// started from find_feasible_start and, when the fixed-amplification MRC
/// problem is feasible, also from its optimum; the better run is kept.
SolveOutcome run_solve(const Scene& scene, const ChannelSet& channels, RunConfig config,
                       std::uint64_t seed, const SpOptions& options = {});

/// Joint MRC successive condensation from find_feasible_start only, for
/// convergence traces.
SolveOutcome run_trace(const Scene& scene, const ChannelSet& channels, std::uint64_t seed,
                       const SpOptions& options = {});

/// from, from + step, ... up to `to` (inclusive within rounding).
std::vector<double> psi_grid(double from, double to, double step);

/// One row per (psi, config) in psi order, then config order. Points are
/// distributed over `jobs` worker threads.
std::vector<ResultRow> run_sweep(const Scene& scene, const ChannelSet& channels,
                                 std::span<const RunConfig> configs, std::span<const double> psis,
                                 std::uint64_t seed, int jobs, const SpOptions& options = {});

inline constexpr std::string_view kCsvHeader =
    "psi,combiner,mode,objective_linear,objective_db,sinr_min,iterations,termination,seed";

std::string format_row(const ResultRow& row);
ResultRow parse_row(std::string_view line);

/// "q,objective_db" followed by one line per trace entry (q starts at 1).
std::string format_trace(const SolveTrace& trace);

/// Process exit status for a termination reason: 0 success, 3 infeasible or
/// ZF not applicable, 4 numerical failure.
int exit_code(Termination t);

}  // namespace rfsense
