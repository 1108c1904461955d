#include "linbandit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace linbandit {

double ExperimentConfig::effective_theta_bound() const {
  return theta_bound > 0.0 ? theta_bound : std::sqrt(static_cast<double>(d));
}

void ExperimentConfig::validate() const {
  if (d < 1) throw std::invalid_argument("d must be positive");
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (action_radius <= 0) throw std::invalid_argument("action radius must be positive");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (scenario == Scenario::kOne) {
    if (k < 1 || block_dim < 1 || d != k * block_dim) {
      throw std::invalid_argument("scenario one requires d == k * block_dim");
    }
  }
  if (fixed_theta_star && fixed_theta_star->size() != d) {
    throw std::invalid_argument("fixed theta dimension mismatch");
  }
  std::set<std::string> labels;
  for (const PolicyConfig& p : policies) {
    if (p.kind == PolicyKind::kSg && (p.alpha < 0 || p.alpha > 1)) {
      throw std::invalid_argument("sieving rate must be in [0, 1]");
    }
    if (p.kind == PolicyKind::kTs && p.inflation <= 0) {
      throw std::invalid_argument("TS inflation must be positive");
    }
    if (!labels.insert(p.label()).second) {
      throw std::invalid_argument("duplicate policy label: " + p.label());
    }
  }
}

double policy_radius(const ExperimentConfig& config, const PolicyConfig& policy) {
  if (policy.kind == PolicyKind::kGreedy) return 0.0;
  if (config.radius_override > 0.0) return config.radius_override;
  RadiusParams params;
  params.horizon = config.horizon;
  params.a_bound = config.action_radius;
  params.sigma = config.sigma;
  params.lambda = config.lambda;
  params.theta_bound = config.effective_theta_bound();
  params.n = config.n;
  params.inflation = policy.inflation;
  if (policy.radius_kind == RadiusKind::kEta) {
    params.d = config.block_dim;
    params.k = config.k;
  } else {
    params.d = config.d;
  }
  return confidence_radius(policy.radius_kind, params);
}

RegretTrace run_episode(const PolicyConfig& policy, const ExperimentConfig& config,
                        int rep) {
  config.validate();

  Rng env_rng(derive_seed(config.base_seed, rep, "env"));
  Vector theta_star;
  if (config.fixed_theta_star) {
    theta_star = *config.fixed_theta_star;
  } else {
    theta_star.resize(config.d);
    for (int i = 0; i < config.d; ++i) theta_star(i) = env_rng.normal();
  }
  const LinearEnvironment env{theta_star, config.sigma, config.action_radius};

  const std::string label = policy.label();
  Rng policy_rng(derive_seed(config.base_seed, rep, "policy:" + label));
  const double radius = policy_radius(config, policy);

  RidgeState state(config.d, config.lambda, config.sigma);
  RegretTrace trace;
  trace.policy_label = label;
  trace.rounds.reserve(config.horizon);
  trace.cumulative.reserve(config.horizon);

  double cumulative = 0.0;
  for (long t = 1; t <= config.horizon; ++t) {
    ActionSet set =
        config.scenario == Scenario::kOne
            ? gen_scenario_one(env_rng, config.k, config.block_dim,
                               config.action_radius, t)
            : gen_scenario_two(env_rng, config.n, config.d, config.action_radius, t);
    const double noise = env_rng.normal() * config.sigma;

    int chosen;
    switch (policy.kind) {
      case PolicyKind::kGreedy:
        chosen = select_greedy(state, set);
        break;
      case PolicyKind::kOful:
        chosen = select_oful(state, radius, set);
        break;
      case PolicyKind::kTs:
        chosen = select_ts(state, policy.inflation, set, policy_rng);
        break;
      case PolicyKind::kSg:
        chosen = select_sg(state, radius, policy.alpha, set);
        break;
      default:
        throw std::logic_error("unknown policy kind");
    }

    const Vector& action = set.actions[chosen];
    const auto [best_index, best_value] = oracle_best(env, set);
    (void)best_index;

    RegretTrace::Round round;
    round.t = t;
    round.chosen = chosen;
    round.inst_regret = best_value - env.mean_reward(action);
    round.gap = gap_of_set(env, set);
    round.uncertainty = uncertainty_v(state, action);
    cumulative += round.inst_regret;
    trace.rounds.push_back(round);
    trace.cumulative.push_back(cumulative);

    state.update(action, env.mean_reward(action) + noise);
  }
  return trace;
}

AggregateResult run_experiment(const ExperimentConfig& config,
                               std::vector<RegretTrace>* traces) {
  config.validate();
  const int reps = config.repetitions;
  const std::size_t num_policies = config.policies.size();

  // per-repetition episode bundles, joined in repetition order
  std::vector<std::vector<RegretTrace>> by_rep(reps);
  auto run_rep = [&](int rep) {
    std::vector<RegretTrace> out;
    out.reserve(num_policies);
    for (const PolicyConfig& p : config.policies) {
      out.push_back(run_episode(p, config, rep));
    }
    return out;
  };

  const unsigned workers =
      config.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  if (workers > 1 && reps > 1) {
    std::vector<std::future<std::vector<RegretTrace>>> futures;
    futures.reserve(reps);
    for (int rep = 0; rep < reps; ++rep) {
      futures.push_back(std::async(std::launch::async | std::launch::deferred,
                                   run_rep, rep));
    }
    for (int rep = 0; rep < reps; ++rep) by_rep[rep] = futures[rep].get();
  } else {
    for (int rep = 0; rep < reps; ++rep) by_rep[rep] = run_rep(rep);
  }

  AggregateResult result;
  result.horizon = config.horizon;
  for (std::size_t p = 0; p < num_policies; ++p) {
    AggregateResult::PolicyCurve curve;
    curve.label = config.policies[p].label();
    const long t_max = config.horizon;
    // Welford over repetitions, pointwise in t
    curve.mean.assign(t_max, 0.0);
    std::vector<double> m2(t_max, 0.0);
    for (int rep = 0; rep < reps; ++rep) {
      const std::vector<double>& cum = by_rep[rep][p].cumulative;
      for (long t = 0; t < t_max; ++t) {
        const double delta = cum[t] - curve.mean[t];
        curve.mean[t] += delta / (rep + 1);
        m2[t] += delta * (cum[t] - curve.mean[t]);
      }
      curve.final_regrets.push_back(cum[t_max - 1]);
    }
    curve.sd.resize(t_max);
    for (long t = 0; t < t_max; ++t) curve.sd[t] = std::sqrt(m2[t] / reps);
    result.policies.push_back(std::move(curve));
  }

  if (traces) {
    traces->clear();
    for (std::size_t p = 0; p < num_policies; ++p) {
      for (int rep = 0; rep < reps; ++rep) {
        traces->push_back(std::move(by_rep[rep][p]));
      }
    }
  }
  return result;
}

namespace {

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string csv_string(const AggregateResult& result, int thin) {
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  std::vector<const AggregateResult::PolicyCurve*> ordered;
  for (const auto& curve : result.policies) ordered.push_back(&curve);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->label < b->label; });

  std::string out = "t,policy,mean_regret,sd_regret\n";
  for (const auto* curve : ordered) {
    for (long t = thin; t <= result.horizon; t += thin) {
      out += std::to_string(t);
      out += ',';
      out += curve->label;
      out += ',';
      out += format_g6(curve->mean[t - 1]);
      out += ',';
      out += format_g6(curve->sd[t - 1]);
      out += '\n';
    }
  }
  return out;
}

void export_csv(const AggregateResult& result, const std::string& path, int thin) {
  write_file(path, csv_string(result, thin));
}

std::string svg_string(const AggregateResult& result) {
  if (result.policies.empty() || result.horizon < 1) {
    throw std::invalid_argument("empty result");
  }
  double y_max = 0.0;
  for (const auto& curve : result.policies) {
    for (long t = 0; t < result.horizon; ++t) {
      y_max = std::max(y_max, curve.mean[t] + 2.0 * curve.sd[t]);
    }
  }
  if (y_max <= 0.0) y_max = 1.0;

  const auto x_of = [&](double t) {
    return svg_layout::kMarginLeft + t / result.horizon * svg_layout::kPlotWidth;
  };
  const auto y_of = [&](double v) {
    return svg_layout::kMarginTop + svg_layout::kPlotHeight -
           v / y_max * svg_layout::kPlotHeight;
  };
  const auto coord = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  constexpr int kPaletteSize = 8;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << svg_layout::kWidth << "\" height=\"" << svg_layout::kHeight
      << "\" viewBox=\"0 0 " << svg_layout::kWidth << " "
      << svg_layout::kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  const double x0 = svg_layout::kMarginLeft;
  const double y0 = svg_layout::kMarginTop + svg_layout::kPlotHeight;
  const double x1 = svg_layout::kMarginLeft + svg_layout::kPlotWidth;
  const double y1 = svg_layout::kMarginTop;
  svg << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\""
      << coord(x1) << "\" y2=\"" << coord(y0)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
      << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\""
      << coord(x0) << "\" y2=\"" << coord(y1)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double tx = result.horizon * i / 5.0;
    const double vy = y_max * i / 5.0;
    svg << "<text x=\"" << coord(x_of(tx)) << "\" y=\"" << coord(y0 + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << format_g6(tx)
        << "</text>\n"
        << "<text x=\"" << coord(x0 - 6) << "\" y=\"" << coord(y_of(vy) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_g6(vy)
        << "</text>\n";
  }
  svg << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\""
      << coord(svg_layout::kHeight - 12)
      << "\" font-size=\"13\" text-anchor=\"middle\">round</text>\n"
      << "<text x=\"16\" y=\"" << coord((y0 + y1) / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << coord((y0 + y1) / 2) << ")\">cumulative regret</text>\n";

  for (std::size_t p = 0; p < result.policies.size(); ++p) {
    const auto& curve = result.policies[p];
    const char* color = kPalette[p % kPaletteSize];

    // +-2 SD band: upper edge forward, lower edge backward
    svg << "<polygon fill=\"" << color
        << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (long t = 1; t <= result.horizon; ++t) {
      svg << coord(x_of(t)) << ','
          << coord(y_of(curve.mean[t - 1] + 2.0 * curve.sd[t - 1])) << ' ';
    }
    for (long t = result.horizon; t >= 1; --t) {
      svg << coord(x_of(t)) << ','
          << coord(y_of(curve.mean[t - 1] - 2.0 * curve.sd[t - 1])) << ' ';
    }
    svg << "\"/>\n";

    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (long t = 1; t <= result.horizon; ++t) {
      svg << coord(x_of(t)) << ',' << coord(y_of(curve.mean[t - 1])) << ' ';
    }
    svg << "\"/>\n";

    // legend entry
    const double ly = y1 + 16.0 * p + 8;
    svg << "<line x1=\"" << coord(x1 + 12) << "\" y1=\"" << coord(ly)
        << "\" x2=\"" << coord(x1 + 34) << "\" y2=\"" << coord(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << coord(x1 + 40) << "\" y=\"" << coord(ly + 4)
        << "\" font-size=\"12\">" << curve.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_plot_svg(const AggregateResult& result, const std::string& path) {
  write_file(path, svg_string(result));
}

void write_trace_file(const std::vector<RegretTrace>& traces, int repetitions,
                      const std::string& path) {
  if (repetitions < 1 || traces.size() % repetitions != 0) {
    throw std::invalid_argument("trace count is not a multiple of repetitions");
  }
  std::string out = "t,rep,policy,chosen,inst_regret,gap,v\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const int rep = static_cast<int>(i % repetitions);
    const RegretTrace& trace = traces[i];
    for (const auto& r : trace.rounds) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%ld,%d,%s,%d,%.9g,%.9g,%.9g\n", r.t, rep,
                    trace.policy_label.c_str(), r.chosen, r.inst_regret, r.gap,
                    r.uncertainty);
      out += buf;
    }
  }
  write_file(path, out);
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::vector<TraceRecord> records;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    TraceRecord rec;
    std::getline(fields, field, ',');
    rec.t = std::stol(field);
    std::getline(fields, field, ',');
    rec.rep = std::stoi(field);
    std::getline(fields, rec.policy, ',');
    std::getline(fields, field, ',');
    rec.chosen = std::stoi(field);
    std::getline(fields, field, ',');
    rec.inst_regret = std::strtod(field.c_str(), nullptr);
    std::getline(fields, field, ',');
    rec.gap = std::strtod(field.c_str(), nullptr);
    std::getline(fields, field, ',');
    rec.uncertainty = std::strtod(field.c_str(), nullptr);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace linbandit
