// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qchan/tomo_sim.hpp"
#include "test_support.hpp"

namespace {

using namespace qchan;
using namespace qchan::tomo;
using linalg::HermitianOperator;
namespace qt = qchan::testing;

std::vector<std::vector<HermitianOperator>> temporal_members(double v) {
  return correlations::temporal_assemblage(channels::depolarizing(v), channels::pauli_measurements()).members();
}

TEST(Probabilities, ClosedFormMatchesGateMixture) {
  for (double v : {0.0, 0.3, 0.8, 1.0})
    for (double w : {0.0, 0.02}) {
      const auto a = ideal_probabilities(v, w);
      const auto b = gate_mixture_probabilities(v, w);
      for (std::size_t i = 0; i < kCombos; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
    }
  const auto p = ideal_probabilities(0.8);
  EXPECT_NEAR(p[0 * kStates + 0], 0.9, 1e-12);  // +x then +x
  EXPECT_NEAR(p[0 * kStates + 1], 0.1, 1e-12);  // +x then -x
  EXPECT_NEAR(p[4 * kStates + 0], 0.5, 1e-12);  // +z then +x
}

TEST(Probabilities, EigenstatesAreOrderedPairs) {
  const auto& s = eigenstates();
  for (std::size_t b = 0; b < 3; ++b) EXPECT_NEAR(std::abs(s[2 * b].dot(s[2 * b + 1])), 0.0, 1e-15);
  const HermitianOperator x(linalg::pauli::x());
  EXPECT_NEAR(linalg::projector(s[0]).inner(x), 1.0, 1e-15);
  EXPECT_NEAR(linalg::projector(s[1]).inner(x), -1.0, 1e-15);
}

TEST(Sampling, DeterministicPerStreamWithPoissonTotals) {
  ExperimentConfig cfg;
  cfg.v = 0.8;
  const auto a = sample_counts(cfg, 3);
  const auto b = sample_counts(cfg, 3);
  const auto c = sample_counts(cfg, 4);
  EXPECT_EQ(a.n, b.n);
  EXPECT_NE(a.n, c.n);
  const double expected = expected_counts(cfg).total();
  EXPECT_NEAR(expected, 18.0 * cfg.counts_per_combo, 1e-6);
  EXPECT_NEAR(a.total(), expected, 5.0 * std::sqrt(expected));
  for (double k : a.n) EXPECT_EQ(k, std::floor(k));
}

TEST(Sampling, ConfigValidation) {
  ExperimentConfig cfg;
  cfg.v = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.v = 0.5;
  cfg.counts_per_combo = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(CountsTable, CsvRoundTrip) {
  ExperimentConfig cfg;
  cfg.v = 0.6;
  cfg.noiseless = true;
  const auto t = expected_counts(cfg);
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, 16), "prep,proj,count\n");
  EXPECT_EQ(CountsTable::from_csv(csv).n, t.n);
  EXPECT_THROW(CountsTable::from_csv("prep,proj,count\n0,0,1\n"), std::invalid_argument);
}

TEST(Mle, NoiselessCountsRecoverTheChannel) {
  for (double v : {0.0, 0.5, 0.8, 1.0}) {
    ExperimentConfig cfg;
    cfg.v = v;
    cfg.noiseless = true;
    const auto r = mle_process(expected_counts(cfg));
    EXPECT_TRUE(r.converged);
    EXPECT_LT(choi_distance(r.choi, channels::depolarizing(v).choi()), 1e-5) << v;
    EXPECT_NEAR(process_fidelity(r.choi, channels::depolarizing(v).choi()), 1.0, 1e-6);
  }
}

TEST(Mle, LikelihoodIsNondecreasingAndEstimateIsAChannel) {
  ExperimentConfig cfg;
  cfg.v = 0.95;
  cfg.counts_per_combo = 200;
  MleOptions o;
  o.record_history = true;
  const auto r = mle_process(sample_counts(cfg, 1), o);
  EXPECT_TRUE(r.monotone);
  ASSERT_GE(r.history.size(), 1u);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1] - 1e-15);
  EXPECT_TRUE(linalg::is_psd(r.choi, 1e-10));
  const auto tp = linalg::partial_trace(r.choi, {2, 2}, linalg::Subsystem::second);
  EXPECT_LT(qt::max_abs_diff(tp.matrix(), ComplexMatrix::Identity(2, 2)), 1e-8);
  EXPECT_NO_THROW(r.channel());
}

TEST(Mle, StateFromSixProjections) {
  // Bloch vector (0.6, 0, 0.8) sampled noiselessly.
  const std::array<double, kStates> counts{800, 200, 500, 500, 900, 100};
  const auto rho = mle_state(counts);
  EXPECT_NEAR(rho.inner(HermitianOperator(linalg::pauli::x())), 0.6, 1e-4);
  EXPECT_NEAR(rho.inner(HermitianOperator(linalg::pauli::z())), 0.8, 1e-4);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
}

TEST(Projection, NoSignalingInputIsReturnedUnchanged) {
  const auto m = temporal_members(0.8);
  const auto r = project_no_signaling(m);
  ASSERT_EQ(r.status, conic::SolveStatus::optimal);
  EXPECT_TRUE(r.unchanged);
  EXPECT_EQ(r.min_fidelity, 1.0);
}

TEST(Projection, PerturbedInputProjectsCloseAndIsIdempotent) {
  auto m = temporal_members(0.8);
  m[0][0] += 0.01 * HermitianOperator(linalg::pauli::z());
  for (FidelityKind kind : {FidelityKind::squared, FidelityKind::root}) {
    const auto r = project_no_signaling(m, kind);
    ASSERT_EQ(r.status, conic::SolveStatus::optimal);
    ASSERT_TRUE(r.assemblage);
    EXPECT_FALSE(r.unchanged);
    EXPECT_TRUE(r.assemblage->no_signaling(1e-8));
    EXPECT_GE(r.min_fidelity, 0.999);
    EXPECT_LT(r.min_fidelity, 1.0);
    const auto again = project_no_signaling(r.assemblage->members(), kind);
    EXPECT_TRUE(again.unchanged);
  }
}

TEST(Projection, HandlesZeroMembers) {
  ComplexVector zero(2);
  zero << 1.0, 0.0;
  const auto p0 = linalg::projector(zero);
  const auto mixed = HermitianOperator::identity(2) / 4.0;
  const std::vector<std::vector<HermitianOperator>> m{{p0, HermitianOperator::zero(2)}, {mixed, mixed}};
  const auto r = project_no_signaling(m);
  ASSERT_EQ(r.status, conic::SolveStatus::optimal);
  ASSERT_TRUE(r.assemblage);
  EXPECT_TRUE(r.assemblage->no_signaling(1e-8));
  EXPECT_GT(r.min_fidelity, 0.0);
  EXPECT_LE(r.min_fidelity, 1.0);
}

TEST(Reconstruct, NoiselessPointMatchesClosedForms) {
  ExperimentConfig cfg;
  cfg.v = 0.8;
  cfg.noiseless = true;
  const auto r = reconstruct(expected_counts(cfg));
  ASSERT_TRUE(r.ok);
  EXPECT_NEAR(r.r_qm, qt::r_qm_closed(0.8), 1e-5);
  EXPECT_NEAR(r.r_ts, qt::r_ts_closed(0.8), 1e-5);
  EXPECT_NEAR(r.r_nmr, qt::r_mr_closed(0.8), 1e-5);
  EXPECT_NEAR(r.f, qt::f_closed(0.8), 1e-5);
  EXPECT_NEAR(r.purity, (3.4 * 3.4 + 3.0 * 0.2 * 0.2) / 16.0, 1e-5);
  EXPECT_NEAR(r.min_projection_fidelity, 1.0, 1e-6);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
  ExperimentConfig cfg;
  cfg.v = 0.8;
  cfg.counts_per_combo = 1e4;
  cfg.trials = 4;
  cfg.threads = 1;
  const auto a = monte_carlo_errors(cfg);
  cfg.threads = 3;
  const auto b = monte_carlo_errors(cfg);
  EXPECT_EQ(a.trials, 4u);
  EXPECT_EQ(a.failures, 0u);
  EXPECT_EQ(a.r_qm.mean, b.r_qm.mean);
  EXPECT_EQ(a.r_qm.stddev, b.r_qm.stddev);
  EXPECT_EQ(a.r_ts.stddev, b.r_ts.stddev);
  EXPECT_GT(a.r_qm.stddev, 0.0);
}

TEST(MonteCarlo, ErrorBarsShrinkLikeInverseRootCounts) {
  ExperimentConfig cfg;
  cfg.v = 0.8;
  cfg.trials = 24;
  cfg.counts_per_combo = 1e3;
  const auto coarse = monte_carlo_errors(cfg);
  cfg.counts_per_combo = 1e5;
  const auto fine = monte_carlo_errors(cfg);
  // Expected ratio 10; 24 trials put the sample-stddev ratio well within [5, 20].
  const double ratio = coarse.r_qm.stddev / fine.r_qm.stddev;
  EXPECT_GT(ratio, 5.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(MonteCarlo, LargeCountEstimatesSitWithinThreeErrorBars) {
  for (double v : {0.4, 0.7, 1.0}) {
    ExperimentConfig cfg;
    cfg.v = v;
    cfg.counts_per_combo = 1e6;
    cfg.trials = 20;
    cfg.seed = 17;
    const auto rep = simulate(cfg);
    ASSERT_EQ(rep.errors.failures, 0u);
    ExperimentConfig quiet = cfg;
    quiet.noiseless = true;
    const auto exact = reconstruct(expected_counts(quiet));
    // At v = 1 the estimates sit on the pure-Choi boundary and the spread
    // falls below the reconstruction floor, hence the additive 1e-8.
    EXPECT_LE(std::abs(rep.estimate.r_qm - exact.r_qm), 3.0 * rep.errors.r_qm.stddev + 1e-8) << v;
    EXPECT_LE(std::abs(rep.estimate.r_ts - exact.r_ts), 3.0 * rep.errors.r_ts.stddev + 1e-8) << v;
    EXPECT_LE(std::abs(rep.estimate.f - exact.f), 3.0 * rep.errors.f.stddev + 1e-8) << v;
  }
}

TEST(Simulate, ReportJsonKeysAndNoiselessRun) {
  ExperimentConfig cfg;
  cfg.v = 0.8;
  cfg.trials = 2;
  cfg.counts_per_combo = 1e4;
  const auto rep = simulate(cfg);
  const auto j = nlohmann::ordered_json::parse(report_json(rep));
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  ASSERT_GE(keys.size(), 7u);
  EXPECT_EQ(keys[0], "v");
  EXPECT_EQ(keys[1], "R_n-MR");
  EXPECT_EQ(keys[2], "R_TS");
  EXPECT_EQ(keys[3], "R_QM");
  EXPECT_EQ(keys[4], "purity");
  EXPECT_EQ(keys[5], "f");
  EXPECT_EQ(keys[6], "errors");
  EXPECT_TRUE(j.at("errors").contains("R_QM"));
  EXPECT_EQ(rep.errors.trials, 2u);

  cfg.noiseless = true;
  const auto quiet = simulate(cfg);
  EXPECT_EQ(quiet.errors.trials, 0u);
  EXPECT_NEAR(quiet.estimate.r_qm, 0.7, 1e-5);
}

}  // namespace
