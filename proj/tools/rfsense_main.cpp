// rfsense: minimum-power transmit/amplification allocation for an
// amplify-and-forward RF sensing network.
//
//   rfsense solve  SCENARIO [--combiner mrc|zf] [--mode joint|txonly] [--psi X]
//   rfsense sweep  SCENARIO --psi-from A --psi-to B --psi-step S
//                  [--combiner mrc,zf] [--mode joint,txonly] [--jobs N]
//   rfsense trace  SCENARIO [--psi X]
//   rfsense lemma1 SCENARIO
//
// Common flags: --seed N (default: the scenario's [rng] seed, else 0),
// --channels FILE (explicit channel realizations), --out FILE (CSV target,
// stdout when omitted).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rfsense/error.hpp"
#include "rfsense/experiment.hpp"
#include "rfsense/scenario.hpp"
#include "rfsense/sinr_model.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;

struct CommonArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string channels;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
  cmd->add_option("scenario", args.scenario, "Scenario file")->required();
  cmd->add_option("--seed", args.seed, "Channel seed (default: scenario [rng] seed, else 0)");
  cmd->add_option("--channels", args.channels, "Channel realization file (overrides --seed)");
  if (with_out) cmd->add_option("--out", args.out, "CSV output file (default: stdout)");
}

struct Loaded {
  rfsense::Scene scene;
  rfsense::ChannelSet channels;
  std::uint64_t seed;
};

Loaded load(const CommonArgs& args) {
  rfsense::ScenarioFile file = rfsense::parse_scenario(args.scenario);
  for (const rfsense::Violation& v : rfsense::validate_scene(file.scene)) {
    if (v.severity == rfsense::Severity::Warning) std::cerr << "warning: " << v.message << '\n';
  }
  Loaded out{std::move(file.scene), {}, args.seed.value_or(file.seed.value_or(0))};
  out.channels = args.channels.empty() ? rfsense::generate_channels(out.scene, out.seed)
                                       : rfsense::parse_channels(args.channels, out.scene);
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

double shown(double x) { return x < 1e-6 ? 0.0 : x; }

void print_summary(const rfsense::Scene& scene, const rfsense::SolveOutcome& r) {
  std::ostream& os = std::cerr;
  os << to_string(r.row.combiner) << '/' << to_string(r.row.mode) << " psi=" << r.row.psi << ": "
     << to_string(r.row.termination);
  if (!r.row.objective_linear) {
    os << " (" << r.message << ")\n";
    return;
  }
  os << " after " << r.row.iterations << " iterations\n";
  os << "  objective " << *r.row.objective_linear << " (" << *r.row.objective_db() << " dB)\n";
  for (int j = 0; j < scene.target_count(); ++j) {
    os << "  p" << j + 1 << " = " << shown(r.point.at(rfsense::tx_power(j))) << "   SINR "
       << r.sinr[j] << " (demand " << scene.sinr_demands[j] << ")\n";
  }
  for (int k = 0; k < scene.sensors.sensor_count; ++k) {
    const auto it = r.point.find(rfsense::amplification(k));
    const double a = it == r.point.end() ? scene.sensors.alpha_max : it->second;
    os << "  a" << k + 1 << " = " << shown(a) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum sum-power allocation for amplify-and-forward RF sensing"};
  app.require_subcommand(1);

  CommonArgs solve_args;
  std::string solve_combiner = "mrc";
  std::string solve_mode = "joint";
  std::optional<double> solve_psi;
  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  add_common(solve, solve_args);
  solve->add_option("--combiner", solve_combiner, "mrc | zf")->check(CLI::IsMember({"mrc", "zf"}));
  solve->add_option("--mode", solve_mode, "joint | txonly")->check(CLI::IsMember({"joint", "txonly"}));
  solve->add_option("--psi", solve_psi, "Override every target's SINR demand");

  CommonArgs sweep_args;
  double psi_from = 0.0;
  double psi_to = 0.0;
  double psi_step = 0.0;
  std::vector<std::string> sweep_combiners{"mrc"};
  std::vector<std::string> sweep_modes{"joint"};
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep = app.add_subcommand("sweep", "Sweep a common SINR demand");
  add_common(sweep, sweep_args);
  sweep->add_option("--psi-from", psi_from)->required();
  sweep->add_option("--psi-to", psi_to)->required();
  sweep->add_option("--psi-step", psi_step)->required()->check(CLI::PositiveNumber);
  sweep->add_option("--combiner", sweep_combiners, "Comma-separated: mrc,zf")
      ->delimiter(',')
      ->check(CLI::IsMember({"mrc", "zf"}));
  sweep->add_option("--mode", sweep_modes, "Comma-separated: joint,txonly")
      ->delimiter(',')
      ->check(CLI::IsMember({"joint", "txonly"}));
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CommonArgs trace_args;
  std::optional<double> trace_psi;
  auto* trace = app.add_subcommand("trace", "Per-iteration objective of the joint MRC solve");
  add_common(trace, trace_args);
  trace->add_option("--psi", trace_psi, "Override every target's SINR demand");

  CommonArgs lemma_args;
  auto* lemma = app.add_subcommand("lemma1", "Check the interference posynomial condition");
  add_common(lemma, lemma_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*solve) {
      Loaded in = load(solve_args);
      if (solve_psi) in.scene = rfsense::with_uniform_demand(in.scene, *solve_psi);
      const rfsense::RunConfig config{rfsense::parse_combiner(solve_combiner),
                                      rfsense::parse_mode(solve_mode)};
      if (config.mode == rfsense::Mode::Joint && config.combiner != rfsense::CombinerScheme::Mrc) {
        std::cerr << "error: --mode joint requires --combiner mrc\n";
        return kExitParse;
      }
      const rfsense::SolveOutcome r = rfsense::run_solve(in.scene, in.channels, config, in.seed);
      emit(solve_args.out, std::string(rfsense::kCsvHeader) + "\n" + rfsense::format_row(r.row) + "\n");
      print_summary(in.scene, r);
      return rfsense::exit_code(r.row.termination);
    }

    if (*sweep) {
      const Loaded in = load(sweep_args);
      std::vector<rfsense::RunConfig> configs;
      for (const std::string& m : sweep_modes) {
        for (const std::string& c : sweep_combiners) {
          const rfsense::RunConfig config{rfsense::parse_combiner(c), rfsense::parse_mode(m)};
          if (config.mode == rfsense::Mode::Joint && config.combiner != rfsense::CombinerScheme::Mrc) {
            continue;
          }
          configs.push_back(config);
        }
      }
      if (configs.empty()) {
        std::cerr << "error: no valid combiner/mode configuration (joint requires mrc)\n";
        return kExitParse;
      }
      const std::vector<double> psis = rfsense::psi_grid(psi_from, psi_to, psi_step);
      const auto rows = rfsense::run_sweep(in.scene, in.channels, configs, psis, in.seed, jobs);
      std::ostringstream csv;
      csv << rfsense::kCsvHeader << '\n';
      int worst = kExitOk;
      for (const rfsense::ResultRow& row : rows) {
        csv << rfsense::format_row(row) << '\n';
        if (row.termination == rfsense::Termination::NumericalFailure) worst = 4;
      }
      emit(sweep_args.out, csv.str());
      return worst;
    }

    if (*trace) {
      Loaded in = load(trace_args);
      if (trace_psi) in.scene = rfsense::with_uniform_demand(in.scene, *trace_psi);
      const rfsense::SolveOutcome r = rfsense::run_trace(in.scene, in.channels, in.seed);
      if (r.row.objective_linear) emit(trace_args.out, rfsense::format_trace(r.trace));
      print_summary(in.scene, r);
      return rfsense::exit_code(r.row.termination);
    }

    if (*lemma) {
      const Loaded in = load(lemma_args);
      const rfsense::Lemma1Report report =
          rfsense::lemma1_check(in.channels, in.scene.target_count());
      std::cout << "posynomial: " << (report.posynomial ? "true" : "false") << '\n';
      for (const auto& v : report.violations) {
        std::cout << "violation: j=" << v.target + 1 << " i=" << v.interferer + 1
                  << " k=" << v.sensor_k + 1 << " l=" << v.sensor_l + 1 << " re=" << v.real_part
                  << '\n';
      }
      return kExitOk;
    }
  } catch (const rfsense::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const rfsense::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitParse;
  } catch (const rfsense::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitOk;
}
