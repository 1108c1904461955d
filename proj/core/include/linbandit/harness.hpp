#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linbandit/analytics.hpp"
#include "linbandit/environment.hpp"
#include "linbandit/policies.hpp"

namespace linbandit {

enum class Scenario { kOne, kTwo };

/// Full description of one experiment: scenario, scale, seeds, and the policy
/// roster. Defaults are the standard benchmark set (d=120, n=10 arms,
/// T=10,000, 50 repetitions, sigma=1, lambda=1, actions on the radius-5
/// sphere).
struct ExperimentConfig {
  Scenario scenario = Scenario::kOne;
  int d = 120;
  int block_dim = 12;
  int k = 10;  // groups (scenario one); requires d == k * block_dim
  int n = 10;  // arms per round
  long horizon = 10000;
  int repetitions = 50;
  std::uint64_t base_seed = 1;
  std::vector<PolicyConfig> policies;
  double sigma = 1.0;
  double lambda = 1.0;
  double action_radius = 5.0;
  double theta_bound = 0.0;     // <= 0: defaults to sqrt(d)
  double radius_override = 0.0;  // > 0: replaces the closed-form radius
  std::optional<Vector> fixed_theta_star;  // frequentist mode
  int thin = 10;
  bool parallel = true;
  std::string out_csv;
  std::string out_svg;
  std::string out_trace;

  double effective_theta_bound() const;
  /// Throws std::invalid_argument on any inconsistency.
  void validate() const;
};

/// Pointwise mean and SD of the cumulative-regret curves, per policy.
struct AggregateResult {
  struct PolicyCurve {
    std::string label;
    std::vector<double> mean;  // length horizon, index t-1
    std::vector<double> sd;
    std::vector<double> final_regrets;  // one per repetition
  };
  long horizon = 0;
  std::vector<PolicyCurve> policies;
};

/// The confidence radius a policy uses under this config.
double policy_radius(const ExperimentConfig& config, const PolicyConfig& policy);

/// Simulates one repetition of one policy. The environment stream (theta_star,
/// action sets, reward noise) is keyed by (base_seed, rep) only, so every
/// policy in a repetition faces identical randomness; TS sampling draws from a
/// separate stream keyed by (base_seed, rep, policy label).
RegretTrace run_episode(const PolicyConfig& policy, const ExperimentConfig& config,
                        int rep);

/// Runs repetitions x policies episodes and aggregates. When `traces` is
/// non-null all per-episode traces are stored there, ordered by (policy,
/// repetition). Parallel and sequential execution produce identical results.
AggregateResult run_experiment(const ExperimentConfig& config,
                               std::vector<RegretTrace>* traces = nullptr);

/// CSV rendering of the thinned curves: header t,policy,mean_regret,sd_regret,
/// rows sorted by (policy label, t), values at 6 significant digits.
std::string csv_string(const AggregateResult& result, int thin);
void export_csv(const AggregateResult& result, const std::string& path, int thin);

/// Fixed plot geometry, exposed so consumers can map data coordinates to SVG
/// coordinates: x(t) = kMarginLeft + t/T * kPlotWidth,
/// y(v) = kMarginTop + kPlotHeight - v/y_max * kPlotHeight.
namespace svg_layout {
inline constexpr double kWidth = 900;
inline constexpr double kHeight = 560;
inline constexpr double kMarginLeft = 70;
inline constexpr double kMarginRight = 170;
inline constexpr double kMarginTop = 30;
inline constexpr double kMarginBottom = 60;
inline constexpr double kPlotWidth = kWidth - kMarginLeft - kMarginRight;
inline constexpr double kPlotHeight = kHeight - kMarginTop - kMarginBottom;
}  // namespace svg_layout

/// Standalone SVG: one mean polyline per policy plus a translucent +-2 SD band.
std::string svg_string(const AggregateResult& result);
void render_plot_svg(const AggregateResult& result, const std::string& path);

/// Raw per-round trace file (header t,rep,policy,chosen,inst_regret,gap,v);
/// one repetition index per trace, in the order produced by run_experiment.
void write_trace_file(const std::vector<RegretTrace>& traces, int repetitions,
                      const std::string& path);

/// One parsed trace-file record.
struct TraceRecord {
  long t = 0;
  int rep = 0;
  std::string policy;
  int chosen = 0;
  double inst_regret = 0;
  double gap = 0;
  double uncertainty = 0;
};
std::vector<TraceRecord> read_trace_file(const std::string& path);

}  // namespace linbandit
