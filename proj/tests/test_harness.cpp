#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "linbandit/cli.hpp"
#include "linbandit/harness.hpp"

using namespace linbandit;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig config;
  config.scenario = Scenario::kTwo;
  config.d = 6;
  config.block_dim = 3;
  config.k = 2;
  config.n = 4;
  config.horizon = 60;
  config.repetitions = 3;
  config.base_seed = 7;
  config.sigma = 1.0;
  config.lambda = 1.0;
  config.action_radius = 2.0;
  return config;
}

PolicyConfig make_policy(PolicyKind kind, double alpha = 0.5,
                         double inflation = 1.0) {
  PolicyConfig p;
  p.kind = kind;
  p.alpha = alpha;
  p.inflation = inflation;
  return p;
}

// All "points" attribute values of the given SVG element tag, parsed into
// coordinate pairs.
std::vector<std::vector<std::pair<double, double>>> svg_points(
    const std::string& svg, const std::string& tag) {
  std::vector<std::vector<std::pair<double, double>>> out;
  std::size_t pos = 0;
  const std::string open = "<" + tag;
  while ((pos = svg.find(open, pos)) != std::string::npos) {
    const std::size_t attr = svg.find("points=\"", pos);
    const std::size_t end = svg.find('"', attr + 8);
    std::istringstream body(svg.substr(attr + 8, end - attr - 8));
    std::vector<std::pair<double, double>> points;
    std::string pair;
    while (body >> pair) {
      const std::size_t comma = pair.find(',');
      points.emplace_back(std::stod(pair.substr(0, comma)),
                          std::stod(pair.substr(comma + 1)));
    }
    out.push_back(std::move(points));
    pos = end;
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig config = small_config();
  CHECK_NOTHROW(config.validate());

  SUBCASE("scenario one needs a consistent block decomposition") {
    config.scenario = Scenario::kOne;
    config.d = 7;  // not k * block_dim
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SUBCASE("duplicate labels rejected") {
    config.policies = {make_policy(PolicyKind::kOful),
                       make_policy(PolicyKind::kOful)};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SUBCASE("TS needs positive inflation") {
    config.policies = {make_policy(PolicyKind::kTs, 0.5, 0.0)};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SUBCASE("theta bound defaults to sqrt(d)") {
    CHECK(config.effective_theta_bound() == doctest::Approx(std::sqrt(6.0)));
    config.theta_bound = 2.0;
    CHECK(config.effective_theta_bound() == 2.0);
  }
}

TEST_CASE("policy radius wiring") {
  ExperimentConfig config = small_config();
  CHECK(policy_radius(config, make_policy(PolicyKind::kGreedy)) == 0.0);

  PolicyConfig oful = make_policy(PolicyKind::kOful);
  RadiusParams params;
  params.d = config.d;
  params.horizon = config.horizon;
  params.a_bound = config.action_radius;
  params.sigma = config.sigma;
  params.lambda = config.lambda;
  params.theta_bound = config.effective_theta_bound();
  params.n = config.n;
  CHECK(policy_radius(config, oful) ==
        doctest::Approx(confidence_radius(RadiusKind::kRho, params)));

  PolicyConfig grouped = oful;
  grouped.radius_kind = RadiusKind::kEta;
  params.d = config.block_dim;
  params.k = config.k;
  CHECK(policy_radius(config, grouped) ==
        doctest::Approx(confidence_radius(RadiusKind::kEta, params)));

  config.radius_override = 3.25;
  CHECK(policy_radius(config, oful) == 3.25);
  CHECK(policy_radius(config, make_policy(PolicyKind::kGreedy)) == 0.0);
}

TEST_CASE("episodes are deterministic in the seed") {
  ExperimentConfig config = small_config();
  PolicyConfig ts = make_policy(PolicyKind::kTs);
  RegretTrace a = run_episode(ts, config, 1);
  RegretTrace b = run_episode(ts, config, 1);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    CHECK(a.rounds[i].chosen == b.rounds[i].chosen);
    CHECK(a.cumulative[i] == b.cumulative[i]);
  }
  RegretTrace c = run_episode(ts, config, 2);
  CHECK(c.cumulative.back() != a.cumulative.back());
}

TEST_CASE("all policies in a repetition face identical environments") {
  ExperimentConfig config = small_config();
  config.policies = {make_policy(PolicyKind::kOful),
                     make_policy(PolicyKind::kGreedy),
                     make_policy(PolicyKind::kTs),
                     make_policy(PolicyKind::kSg)};
  std::vector<RegretTrace> traces;
  run_experiment(config, &traces);
  REQUIRE(traces.size() == 4 * 3);
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const std::vector<double> reference = traces[rep].gaps();  // policy 0
    for (std::size_t p = 1; p < config.policies.size(); ++p) {
      CHECK(traces[p * config.repetitions + rep].gaps() == reference);
    }
  }
}

TEST_CASE("fully sieved greedy coincides with pure optimism") {
  ExperimentConfig config = small_config();
  PolicyConfig oful = make_policy(PolicyKind::kOful);
  PolicyConfig sg1 = make_policy(PolicyKind::kSg, 1.0);
  for (int rep = 0; rep < 3; ++rep) {
    RegretTrace a = run_episode(oful, config, rep);
    RegretTrace b = run_episode(sg1, config, rep);
    for (std::size_t i = 0; i < a.rounds.size(); ++i) {
      CHECK(a.rounds[i].chosen == b.rounds[i].chosen);
    }
    CHECK(a.cumulative.back() == doctest::Approx(b.cumulative.back()));
  }
}

TEST_CASE("aggregation") {
  ExperimentConfig config = small_config();
  config.policies = {make_policy(PolicyKind::kOful),
                     make_policy(PolicyKind::kGreedy)};
  std::vector<RegretTrace> traces;
  AggregateResult result = run_experiment(config, &traces);
  REQUIRE(result.policies.size() == 2);
  REQUIRE(result.horizon == config.horizon);

  SUBCASE("matches a two-pass mean and SD computed from the raw traces") {
    for (std::size_t p = 0; p < 2; ++p) {
      const auto& curve = result.policies[p];
      REQUIRE(static_cast<long>(curve.mean.size()) == config.horizon);
      for (long t = 0; t < config.horizon; t += 7) {
        double sum = 0;
        for (int rep = 0; rep < config.repetitions; ++rep) {
          sum += traces[p * config.repetitions + rep].cumulative[t];
        }
        const double mean = sum / config.repetitions;
        double ss = 0;
        for (int rep = 0; rep < config.repetitions; ++rep) {
          const double dev =
              traces[p * config.repetitions + rep].cumulative[t] - mean;
          ss += dev * dev;
        }
        const double sd = std::sqrt(ss / config.repetitions);
        CHECK(curve.mean[t] == doctest::Approx(mean).epsilon(1e-9));
        CHECK(curve.sd[t] == doctest::Approx(sd).epsilon(1e-9));
      }
    }
  }

  SUBCASE("final mean equals the average of per-repetition final regrets") {
    for (const auto& curve : result.policies) {
      REQUIRE(curve.final_regrets.size() == 3);
      double sum = 0;
      for (double f : curve.final_regrets) sum += f;
      CHECK(curve.mean.back() == doctest::Approx(sum / 3.0).epsilon(1e-9));
    }
  }

  SUBCASE("a single repetition has zero spread") {
    config.repetitions = 1;
    AggregateResult one = run_experiment(config);
    for (const auto& curve : one.policies) {
      for (double s : curve.sd) CHECK(s == 0.0);
    }
  }

  SUBCASE("parallel and sequential runs agree exactly") {
    config.parallel = false;
    AggregateResult sequential = run_experiment(config);
    for (std::size_t p = 0; p < 2; ++p) {
      CHECK(result.policies[p].mean == sequential.policies[p].mean);
      CHECK(result.policies[p].sd == sequential.policies[p].sd);
    }
  }
}

TEST_CASE("CSV rendering") {
  ExperimentConfig config = small_config();
  config.horizon = 100;
  config.policies = {make_policy(PolicyKind::kOful),
                     make_policy(PolicyKind::kGreedy)};
  AggregateResult result = run_experiment(config);
  const std::string csv = csv_string(result, 10);
  const std::vector<std::string> lines = split_lines(csv);

  // header + 2 policies x 10 thinned rounds
  REQUIRE(lines.size() == 21);
  CHECK(lines[0] == "t,policy,mean_regret,sd_regret");

  // rows are sorted by label, then by t; greedy < oful lexicographically
  CHECK(lines[1].substr(0, 10) == "10,greedy,");
  CHECK(lines[10].substr(0, 11) == "100,greedy,");
  CHECK(lines[11].substr(0, 8) == "10,oful,");

  // parse a row back and compare against the curve
  std::istringstream row(lines[11]);
  std::string t_field, label, mean_field, sd_field;
  std::getline(row, t_field, ',');
  std::getline(row, label, ',');
  std::getline(row, mean_field, ',');
  std::getline(row, sd_field, ',');
  const auto& oful_curve =
      result.policies[0].label == "oful" ? result.policies[0] : result.policies[1];
  CHECK(std::stod(mean_field) ==
        doctest::Approx(oful_curve.mean[9]).epsilon(1e-5));
  CHECK(std::stod(sd_field) == doctest::Approx(oful_curve.sd[9]).epsilon(1e-5));

  // no policies: header only
  AggregateResult empty;
  empty.horizon = 100;
  CHECK(csv_string(empty, 10) == "t,policy,mean_regret,sd_regret\n");

  CHECK_THROWS_AS(csv_string(result, 0), std::invalid_argument);
}

TEST_CASE("SVG rendering") {
  // hand-built result: one linear curve with constant spread, one flat zero
  AggregateResult result;
  result.horizon = 10;
  AggregateResult::PolicyCurve rising;
  rising.label = "rising";
  for (int t = 1; t <= 10; ++t) {
    rising.mean.push_back(static_cast<double>(t));
    rising.sd.push_back(0.5);
  }
  AggregateResult::PolicyCurve flat;
  flat.label = "flat";
  flat.mean.assign(10, 0.0);
  flat.sd.assign(10, 0.0);
  result.policies = {rising, flat};

  const std::string svg = svg_string(result);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("cumulative regret") != std::string::npos);
  CHECK(svg.find(">round<") != std::string::npos);
  CHECK(svg.find(">rising<") != std::string::npos);
  CHECK(svg.find(">flat<") != std::string::npos);

  const auto polylines = svg_points(svg, "polyline");
  const auto polygons = svg_points(svg, "polygon");
  REQUIRE(polylines.size() == 2);  // one mean line per policy
  REQUIRE(polygons.size() == 2);   // one band per policy

  const double y_max = 11.0;  // max(mean + 2 sd) = 10 + 1
  const auto x_of = [&](double t) {
    return svg_layout::kMarginLeft + t / 10.0 * svg_layout::kPlotWidth;
  };
  const auto y_of = [&](double v) {
    return svg_layout::kMarginTop + svg_layout::kPlotHeight -
           v / y_max * svg_layout::kPlotHeight;
  };

  // rising mean line maps data to plot coordinates as documented
  REQUIRE(polylines[0].size() == 10);
  for (int t = 1; t <= 10; ++t) {
    CHECK(polylines[0][t - 1].first == doctest::Approx(x_of(t)).epsilon(1e-4));
    CHECK(polylines[0][t - 1].second == doctest::Approx(y_of(t)).epsilon(1e-4));
  }

  // band polygon: upper edge forward then lower edge backward
  REQUIRE(polygons[0].size() == 20);
  CHECK(polygons[0][0].second == doctest::Approx(y_of(1.0 + 1.0)).epsilon(1e-4));
  CHECK(polygons[0][19].second == doctest::Approx(y_of(1.0 - 1.0)).epsilon(1e-4));

  // a zero-regret policy renders as a horizontal line on the x-axis
  const double base = svg_layout::kMarginTop + svg_layout::kPlotHeight;
  for (const auto& [x, y] : polylines[1]) {
    (void)x;
    CHECK(y == doctest::Approx(base).epsilon(1e-6));
  }

  AggregateResult empty;
  CHECK_THROWS_AS(svg_string(empty), std::invalid_argument);
}

TEST_CASE("trace files round-trip, including infinite gaps") {
  ExperimentConfig config = small_config();
  config.n = 1;  // singleton action sets: every gap is +infinity
  config.horizon = 20;
  config.repetitions = 2;
  config.policies = {make_policy(PolicyKind::kOful),
                     make_policy(PolicyKind::kGreedy)};
  std::vector<RegretTrace> traces;
  run_experiment(config, &traces);

  const std::string path = "trace_roundtrip_test.csv";
  write_trace_file(traces, config.repetitions, path);
  const std::vector<TraceRecord> records = read_trace_file(path);
  std::remove(path.c_str());

  REQUIRE(records.size() == traces.size() * config.horizon);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const int rep = static_cast<int>(i % config.repetitions);
    for (const auto& round : traces[i].rounds) {
      const TraceRecord& rec = records[idx++];
      CHECK(rec.t == round.t);
      CHECK(rec.rep == rep);
      CHECK(rec.policy == traces[i].policy_label);
      CHECK(rec.chosen == round.chosen);
      CHECK(rec.inst_regret == doctest::Approx(round.inst_regret));
      CHECK(std::isinf(rec.gap));
      CHECK(rec.uncertainty == doctest::Approx(round.uncertainty));
    }
  }
  CHECK_THROWS_AS(read_trace_file("no_such_file.csv"), std::runtime_error);
}

TEST_CASE("command-line parsing") {
  SUBCASE("run defaults are the standard benchmark roster") {
    ParsedCommand cmd = parse_command_line({"run"});
    CHECK(cmd.kind == ParsedCommand::Kind::kRun);
    CHECK(cmd.run.scenario == Scenario::kOne);
    CHECK(cmd.run.d == 120);
    CHECK(cmd.run.horizon == 10000);
    REQUIRE(cmd.run.policies.size() == 6);
    CHECK(cmd.run.policies[0].label() == "oful");
    CHECK(cmd.run.policies[1].label() == "ts");
    CHECK(cmd.run.policies[2].label() == "greedy");
    CHECK(cmd.run.policies[3].label() == "sg(0.2)");
    CHECK(cmd.run.policies[4].label() == "sg(0.5)");
    CHECK(cmd.run.policies[5].label() == "sg(0.8)");
  }

  SUBCASE("explicit roster and scenario") {
    ParsedCommand cmd = parse_command_line(
        {"run", "--scenario", "2", "--d", "8", "--n", "5", "--horizon", "50",
         "--reps", "2", "--policy", "sg", "--alpha", "0.3", "--sequential",
         "--radius-kind", "rho-prime"});
    CHECK(cmd.run.scenario == Scenario::kTwo);
    CHECK(cmd.run.d == 8);
    CHECK(!cmd.run.parallel);
    REQUIRE(cmd.run.policies.size() == 1);
    CHECK(cmd.run.policies[0].label() == "sg(0.3)");
    CHECK(cmd.run.policies[0].radius_kind == RadiusKind::kRhoPrime);
  }

  SUBCASE("invalid inputs raise") {
    CHECK_THROWS_AS(parse_command_line({"run", "--reps", "0"}), CliError);
    CHECK_THROWS_AS(parse_command_line({"run", "--horizon", "1"}), CliError);
    CHECK_THROWS_AS(parse_command_line({"run", "--no-such-flag"}), CliError);
    CHECK_THROWS_AS(parse_command_line({"run", "--policy", "ucb"}), CliError);
    CHECK_THROWS_AS(parse_command_line({"run", "--alpha", "1.5", "--policy", "sg"}),
                    CliError);
    CHECK_THROWS_AS(parse_command_line({}), CliError);  // subcommand required
    CHECK_THROWS_AS(parse_command_line({"diagnose"}), CliError);  // --trace required
  }

  SUBCASE("bounds query") {
    ParsedCommand cmd = parse_command_line(
        {"bounds", "--d", "2", "--horizon", "100", "--a-bound", "1",
         "--theta-bound", "1", "--policy", "oful"});
    CHECK(cmd.kind == ParsedCommand::Kind::kBounds);
    BoundCertificate cert = bounds_from_query(cmd.bounds);
    CHECK(cert.complexity_k == doctest::Approx(4.0 * std::log(51.0)));
    CHECK(cert.optimism_p == 1.0);
    CHECK(cert.gap_independent_bound > 0.0);
    // at the default delta the two certificates coincide when q = 1
    CHECK(cert.gap_dependent_bound ==
          doctest::Approx(cert.gap_independent_bound));
  }
}

TEST_CASE("diagnose report groups by policy") {
  std::vector<TraceRecord> records;
  for (long t = 1; t <= 40; ++t) {
    records.push_back({t, 0, "oful", 0, 0.1, 0.05 * t, 1.0 / t});
    records.push_back(
        {t, 0, "greedy", 1, 0.2, std::numeric_limits<double>::infinity(), 0.5});
  }
  const std::string report = diagnose_report(records);
  CHECK(report.find("policy oful:") != std::string::npos);
  CHECK(report.find("policy greedy:") != std::string::npos);
  CHECK(report.find("rounds=40") != std::string::npos);
  CHECK(report.find("margin_c0=") != std::string::npos);
  CHECK(report.find("all gaps infinite") != std::string::npos);
  CHECK_THROWS_AS(diagnose_report({}), std::invalid_argument);
}
