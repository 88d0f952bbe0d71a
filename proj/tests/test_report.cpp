#include <sstream>

#include <gtest/gtest.h>

#include "mixnet/mixnet.hpp"

using namespace mixnet;

namespace {

ConvergenceReport small_report() {
  std::vector<Arc> a{{0, 1}, {1, 2}, {0, 2}, {2, 3}};
  Graph g = Graph::from_arcs(4, false, a);
  TransitionMatrix P(g);
  return convergence_profile(P, degree_stationary(P), Distribution::point_mass(4, 3), 5);
}

}  // namespace

TEST(ReportJson, ConvergenceSchema) {
  auto r = small_report();
  json j = to_json(r, "er", json{{"p", 0.1}}, 7);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["model"], "er");
  EXPECT_EQ(j["params"]["p"], 0.1);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_DOUBLE_EQ(j["max_anonymity_bits"].get<double>(), r.max_anonymity_bits);
  EXPECT_EQ(j["criterion"]["rule"], "entropy-gap");
  ASSERT_EQ(j["trace"].size(), 6u);
  EXPECT_EQ(j["trace"][2]["t"], 2);
  EXPECT_DOUBLE_EQ(j["trace"][2]["entropy"].get<double>(), r.trace[2].entropy_bits);
  EXPECT_DOUBLE_EQ(j["trace"][2]["rpd"].get<double>(), r.trace[2].rpd);
}

TEST(ReportJson, NotReachedIsNull) {
  auto r = small_report();
  r.t_converge.reset();
  EXPECT_TRUE(to_json(r)["t_converge"].is_null());
  EXPECT_TRUE(to_json(r)["seed"].is_null());
}

TEST(ReportCsv, TraceColumns) {
  auto r = small_report();
  std::ostringstream out;
  write_trace_csv(r, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,entropy_bits,rpd");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
    ++rows;
  }
  EXPECT_EQ(rows, r.trace.size());
}

TEST(ReportJson, AttackReport) {
  AttackReport rep;
  rep.compromised = {1, 2};
  rep.estimates.push_back({3, 100, 5, 0.05, 0.02, 0.04});
  rep.gilbert_bounds.push_back(0.9);
  rep.pi_mass = 0.3;
  rep.gap = 0.4;
  json j = to_json(rep);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["compromised_count"], 2);
  EXPECT_EQ(j["estimates"][0]["compromised_fraction"], 0.05);
  EXPECT_EQ(j["estimates"][0]["gilbert_bound"], 0.9);
  EXPECT_EQ(j["pi_mass"], 0.3);
  EXPECT_FALSE(j.contains("batch"));
}

TEST(ReportCsv, BatchRow) {
  std::ostringstream out;
  write_batch_csv_header(out);
  write_batch_csv_row(out, "regular", "degree=14", {14, 14.0, 1.0 / 14, 4.68});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "model,params,mean_degree,p_min,batch_size");
  EXPECT_NE(out.str().find("regular,\"degree=14\",14,"), std::string::npos);
}

TEST(ReportJson, GeneratorConfigTyped) {
  GeneratorConfig c;
  c.model = Model::SFR;
  c.n = 100;
  c.mean_degree = 4.0;
  json j = to_json(c);
  EXPECT_EQ(j["model"], "sfr");
  EXPECT_EQ(j["n"], 100);
  EXPECT_EQ(j["mean_degree"], 4.0);
  EXPECT_FALSE(j.contains("alpha"));
}

TEST(ReportJson, DeterministicDump) {
  EXPECT_EQ(to_json(small_report()).dump(), to_json(small_report()).dump());
}

TEST(ReportJson, Spectral) {
  SpectralSummary s{0.25, 0.75, 12, true, SpectralMethod::Deflation};
  json j = to_json(s);
  EXPECT_EQ(j["method"], "deflation");
  EXPECT_EQ(j["gap"], 0.75);
  SizeSweep sweep;
  sweep.rows.push_back({100, 0.5, 0.01, {0.5}});
  sweep.rows.push_back({200, 0.52, 0.01, {0.52}});
  EXPECT_NEAR(to_json(sweep)["spread"].get<double>(), 0.02, 1e-15);
}
