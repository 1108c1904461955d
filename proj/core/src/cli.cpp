#include "linbandit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

namespace linbandit {

namespace {

RadiusKind parse_radius_kind(const std::string& name) {
  if (name == "rho") return RadiusKind::kRho;
  if (name == "rho-prime") return RadiusKind::kRhoPrime;
  if (name == "rho-double-prime") return RadiusKind::kRhoDoublePrime;
  if (name == "eta") return RadiusKind::kEta;
  throw CliError("unknown radius kind: " + name);
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "oful") return PolicyKind::kOful;
  if (name == "ts") return PolicyKind::kTs;
  if (name == "greedy") return PolicyKind::kGreedy;
  if (name == "sg") return PolicyKind::kSg;
  throw CliError("unknown policy: " + name);
}

struct CliState {
  CLI::App app{"stochastic linear bandit simulator"};
  CLI::App* run = nullptr;
  CLI::App* bounds = nullptr;
  CLI::App* diagnose = nullptr;

  // run options
  int scenario = 1;
  std::vector<std::string> policy_names;
  std::vector<double> alphas;
  double inflation = 1.0;
  std::string radius_kind = "rho";
  bool sequential = false;
  ExperimentConfig config;

  // bounds options
  BoundsQuery query;
  std::string bounds_policy = "oful";
  std::string bounds_radius_kind = "rho";

  DiagnoseArgs diag;

  CliState() {
    app.require_subcommand(1);

    run = app.add_subcommand("run", "simulate policies and aggregate regret");
    run->add_option("--scenario", scenario, "action-set scenario")
        ->check(CLI::IsMember({1, 2}));
    run->add_option("--d", config.d, "ambient dimension")->check(CLI::PositiveNumber);
    run->add_option("--block-dim", config.block_dim, "block size (scenario 1)")
        ->check(CLI::PositiveNumber);
    run->add_option("--k", config.k, "number of groups (scenario 1)")
        ->check(CLI::PositiveNumber);
    run->add_option("--n", config.n, "actions per round")->check(CLI::PositiveNumber);
    run->add_option("--horizon", config.horizon, "number of rounds")
        ->check(CLI::Range(2L, std::numeric_limits<long>::max()));
    run->add_option("--reps", config.repetitions, "repetitions")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", config.base_seed, "base seed");
    run->add_option("--policy", policy_names,
                    "policy to run (repeatable): oful|ts|greedy|sg");
    run->add_option("--alpha", alphas,
                    "sieving rate(s); assigned to sg policies in order");
    run->add_option("--inflation", inflation, "TS posterior inflation")
        ->check(CLI::PositiveNumber);
    run->add_option("--sigma", config.sigma, "noise scale")->check(CLI::PositiveNumber);
    run->add_option("--lambda", config.lambda, "ridge/prior scale")
        ->check(CLI::PositiveNumber);
    run->add_option("--radius", config.action_radius, "action sphere radius")
        ->check(CLI::PositiveNumber);
    run->add_option("--radius-kind", radius_kind,
                    "rho|rho-prime|rho-double-prime|eta")
        ->check(CLI::IsMember({"rho", "rho-prime", "rho-double-prime", "eta"}));
    run->add_option("--radius-override", config.radius_override,
                    "fixed confidence radius instead of the closed form");
    run->add_option("--theta-bound", config.theta_bound,
                    "prior-scale parameter (default sqrt(d))");
    run->add_option("--thin", config.thin, "keep every m-th round in the CSV")
        ->check(CLI::PositiveNumber);
    run->add_option("--out-csv", config.out_csv, "CSV output path");
    run->add_option("--out-svg", config.out_svg, "SVG plot output path");
    run->add_option("--out-trace", config.out_trace, "raw per-round trace path");
    run->add_flag("--sequential", sequential, "disable parallel repetitions");

    bounds = app.add_subcommand("bounds", "print a regret-bound certificate");
    bounds->add_option("--d", query.d)->check(CLI::PositiveNumber);
    bounds->add_option("--horizon", query.horizon)
        ->check(CLI::Range(2L, std::numeric_limits<long>::max()));
    bounds->add_option("--n", query.n)->check(CLI::PositiveNumber);
    bounds->add_option("--k", query.k)->check(CLI::PositiveNumber);
    bounds->add_option("--a-bound", query.a_bound)->check(CLI::PositiveNumber);
    bounds->add_option("--sigma", query.sigma)->check(CLI::PositiveNumber);
    bounds->add_option("--lambda", query.lambda)->check(CLI::PositiveNumber);
    bounds->add_option("--theta-bound", query.theta_bound);
    bounds->add_option("--policy", bounds_policy)
        ->check(CLI::IsMember({"oful", "ts", "sg"}));
    bounds->add_option("--alpha", query.policy.alpha)->check(CLI::Range(0.0, 1.0));
    bounds->add_option("--inflation", query.policy.inflation)
        ->check(CLI::PositiveNumber);
    bounds->add_option("--radius-kind", bounds_radius_kind)
        ->check(CLI::IsMember({"rho", "rho-prime", "rho-double-prime", "eta"}));
    bounds->add_option("--delta", query.delta, "gap level");
    bounds->add_option("--q-delta", query.q_delta, "gap probability bound")
        ->check(CLI::Range(0.0, 1.0));

    diagnose = app.add_subcommand("diagnose",
                                  "margin/expansion analytics on a trace file");
    diagnose->add_option("--trace", diag.trace_path, "raw trace file")->required();
    diagnose->add_option("--delta", diag.delta, "margin-fit gap cap");
  }
};

std::vector<PolicyConfig> build_policies(const std::vector<std::string>& names,
                                         const std::vector<double>& alphas,
                                         double inflation, RadiusKind radius_kind) {
  std::vector<std::string> effective = names;
  if (effective.empty()) {
    effective = {"oful", "ts", "greedy", "sg", "sg", "sg"};
  }
  std::vector<double> sg_alphas = alphas;
  if (sg_alphas.empty()) sg_alphas = {0.2, 0.5, 0.8};
  for (double a : sg_alphas) {
    if (a < 0.0 || a > 1.0) throw CliError("sieving rate must be in [0, 1]");
  }
  std::size_t next_alpha = 0;
  std::vector<PolicyConfig> out;
  for (const std::string& name : effective) {
    PolicyConfig p;
    p.kind = parse_policy_kind(name);
    p.radius_kind = radius_kind;
    p.inflation = inflation;
    if (p.kind == PolicyKind::kSg) {
      p.alpha = sg_alphas[std::min(next_alpha, sg_alphas.size() - 1)];
      ++next_alpha;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

ParsedCommand parse_command_line(const std::vector<std::string>& args) {
  CliState state;
  std::vector<const char*> argv;
  argv.push_back("linbandit");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    state.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw CliError(state.app.help());
  } catch (const CLI::ParseError& e) {
    throw CliError(e.what());
  }

  ParsedCommand cmd;
  if (state.app.got_subcommand(state.run)) {
    cmd.kind = ParsedCommand::Kind::kRun;
    cmd.run = state.config;
    cmd.run.scenario = state.scenario == 1 ? Scenario::kOne : Scenario::kTwo;
    cmd.run.parallel = !state.sequential;
    cmd.run.policies = build_policies(state.policy_names, state.alphas,
                                      state.inflation,
                                      parse_radius_kind(state.radius_kind));
    try {
      cmd.run.validate();
    } catch (const std::invalid_argument& e) {
      throw CliError(e.what());
    }
  } else if (state.app.got_subcommand(state.bounds)) {
    cmd.kind = ParsedCommand::Kind::kBounds;
    cmd.bounds = state.query;
    cmd.bounds.policy.kind = parse_policy_kind(state.bounds_policy);
    cmd.bounds.policy.radius_kind = parse_radius_kind(state.bounds_radius_kind);
    cmd.bounds.policy.inflation = state.query.policy.inflation;
    cmd.bounds.policy.alpha = state.query.policy.alpha;
  } else {
    cmd.kind = ParsedCommand::Kind::kDiagnose;
    cmd.diagnose = state.diag;
  }
  return cmd;
}

BoundCertificate bounds_from_query(const BoundsQuery& query) {
  RadiusParams params;
  params.horizon = query.horizon;
  params.a_bound = query.a_bound;
  params.sigma = query.sigma;
  params.lambda = query.lambda;
  params.theta_bound =
      query.theta_bound > 0 ? query.theta_bound : std::sqrt(query.d);
  params.n = query.n;
  params.k = query.k;
  params.inflation = query.policy.inflation;
  params.d = query.d;

  const double rho = confidence_radius(RadiusKind::kRho, params);
  const double p = optimism_parameter(query.policy, rho);
  const double complexity = uncertainty_complexity_bound(
      query.d, query.horizon, query.a_bound, query.lambda, query.sigma);
  const double log_t = std::log(static_cast<double>(query.horizon));
  const double spread = params.theta_bound + std::sqrt(7.0 * log_t);
  const double deviation = 4.0 * query.a_bound * query.a_bound * spread * spread;
  double delta = query.delta;
  if (delta <= 0) {
    delta = std::sqrt((2.0 * complexity / p + deviation) / query.horizon);
    if (!std::isfinite(delta) || delta <= 0) delta = 1.0;
  }
  return regret_bounds(complexity, p, deviation, query.horizon, delta,
                       query.q_delta);
}

std::string diagnose_report(const std::vector<TraceRecord>& records, double delta) {
  if (records.empty()) throw std::invalid_argument("empty trace");
  std::map<std::string, std::vector<const TraceRecord*>> by_policy;
  for (const TraceRecord& r : records) by_policy[r.policy].push_back(&r);

  std::ostringstream out;
  for (const auto& [policy, rows] : by_policy) {
    std::vector<double> gaps;
    std::vector<double> scaled_v;
    double total_regret = 0;
    for (const TraceRecord* r : rows) {
      gaps.push_back(r->gap);
      total_regret += r->inst_regret;
      if (r->t >= 1) scaled_v.push_back(r->t * r->uncertainty);
    }
    MarginFit fit = fit_margin(gaps, delta);
    std::sort(scaled_v.begin(), scaled_v.end());
    const double v_median =
        scaled_v.empty()
            ? 0.0
            : (scaled_v.size() % 2 == 1
                   ? scaled_v[scaled_v.size() / 2]
                   : 0.5 * (scaled_v[scaled_v.size() / 2 - 1] +
                            scaled_v[scaled_v.size() / 2]));
    out << "policy " << policy << ": rounds=" << rows.size()
        << " total_regret=" << total_regret;
    if (fit.delta > 0) {
      out << " margin_c0=" << fit.c0 << " delta=" << fit.delta
          << " q_delta=" << empirical_margin(gaps, fit.delta);
    } else {
      out << " margin_c0=n/a (all gaps infinite)";
    }
    out << " median_t_v=" << v_median << "\n";
  }
  return out.str();
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  ParsedCommand cmd;
  try {
    cmd = parse_command_line(args);
  } catch (const CliError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    switch (cmd.kind) {
      case ParsedCommand::Kind::kRun: {
        std::vector<RegretTrace> traces;
        const bool want_traces = !cmd.run.out_trace.empty();
        AggregateResult result =
            run_experiment(cmd.run, want_traces ? &traces : nullptr);
        for (const auto& curve : result.policies) {
          std::printf("%-10s final regret %.6g +- %.6g (mean +- sd over %d reps)\n",
                      curve.label.c_str(), curve.mean.back(), curve.sd.back(),
                      cmd.run.repetitions);
        }
        if (!cmd.run.out_csv.empty()) {
          export_csv(result, cmd.run.out_csv, cmd.run.thin);
          std::printf("wrote %s\n", cmd.run.out_csv.c_str());
        }
        if (!cmd.run.out_svg.empty()) {
          render_plot_svg(result, cmd.run.out_svg);
          std::printf("wrote %s\n", cmd.run.out_svg.c_str());
        }
        if (want_traces) {
          write_trace_file(traces, cmd.run.repetitions, cmd.run.out_trace);
          std::printf("wrote %s\n", cmd.run.out_trace.c_str());
        }
        return 0;
      }
      case ParsedCommand::Kind::kBounds: {
        const BoundCertificate cert = bounds_from_query(cmd.bounds);
        std::printf("K            %.6g\n", cert.complexity_k);
        std::printf("p            %.6g\n", cert.optimism_p);
        std::printf("D            %.6g (Gaussian-prior surrogate)\n",
                    cert.deviation_d);
        std::printf("delta        %.6g\n", cert.delta);
        std::printf("q_delta      %.6g\n", cert.q_delta);
        std::printf("gap-dependent bound    %.6g\n", cert.gap_dependent_bound);
        std::printf("gap-independent bound  %.6g\n", cert.gap_independent_bound);
        return 0;
      }
      case ParsedCommand::Kind::kDiagnose: {
        const auto records = read_trace_file(cmd.diagnose.trace_path);
        std::cout << diagnose_report(records, cmd.diagnose.delta);
        return 0;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace linbandit
