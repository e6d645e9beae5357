// Copyright 2026 The tomocs Authors
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
#include "tomocs/metrics.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tomocs/bases.hpp"
#include "tomocs/channel.hpp"
#include "tomocs/errors.hpp"
#include "tomocs/rng.hpp"

namespace tomocs {
namespace {

BasisPtr share(OperatorBasis b) { return std::make_shared<const OperatorBasis>(std::move(b)); }

/// Kraus operators of a random channel from a Haar-like isometry d -> d * r.
std::vector<CMatrix> random_kraus(int d, int r, std::uint64_t seed) {
  StreamRng rng(seed);
  CMatrix g(d * r, d);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix v = qr.householderQ() * CMatrix::Identity(d * r, d);
  std::vector<CMatrix> out;
  for (int k = 0; k < r; ++k) out.push_back(v.middleRows(k * d, d));
  return out;
}

ProcessMatrix chi_from_kraus(const std::vector<CMatrix>& kraus, const BasisPtr& basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  CMatrix chi = CMatrix::Zero(n, n);
  for (const auto& a : kraus) {
    const CVector c = basis->coefficients(a);
    chi += c * c.adjoint();
  }
  return ProcessMatrix(basis, chi);
}

TEST(Metrics, ProcessFidelityBasics) {
  const UnitaryGate g = gate_library("cz");
  const BasisPtr pauli = share(pauli_basis(2));
  const BasisPtr svd = share(svd_basis(g.matrix()));
  const ProcessMatrix a = chi_from_kraus(random_kraus(4, 2, 1), pauli);
  const ProcessMatrix b = chi_from_kraus(random_kraus(4, 3, 2), pauli);
  EXPECT_NEAR(process_fidelity(a, a), 1.0, 1e-9);
  EXPECT_NEAR(process_fidelity(a, b), process_fidelity(b, a), 1e-10);
  EXPECT_LT(process_fidelity(a, b), 1.0);
  // Basis independent, and mixed bases are converted.
  EXPECT_NEAR(process_fidelity(a.in_basis(svd), b.in_basis(svd)), process_fidelity(a, b), 1e-9);
  EXPECT_NEAR(process_fidelity(a.in_basis(svd), b), process_fidelity(a, b), 1e-9);
  // Against a unitary target the fidelity is the overlap Tr(chi chi_ideal).
  const ProcessMatrix ideal = ideal_chi(g, pauli);
  EXPECT_NEAR(process_fidelity(a, ideal), (a.chi() * ideal.chi()).trace().real(), 1e-10);
}

TEST(Metrics, ProcessFidelityRejectsNonphysicalInput) {
  const BasisPtr pauli = share(pauli_basis(1));
  CMatrix chi = CMatrix::Zero(4, 4);
  chi(0, 0) = 1.2;
  chi(3, 3) = -0.2;
  const ProcessMatrix bad(pauli, chi);
  const ProcessMatrix good = ideal_chi(gate_library("identity1"), pauli);
  EXPECT_THROW(process_fidelity(bad, good), Error);
}

TEST(Metrics, UhlmannFidelityOfCommutingStates) {
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 0.7;
  a(1, 1) = 0.3;
  b(0, 0) = 0.2;
  b(1, 1) = 0.8;
  const double root = std::sqrt(0.7 * 0.2) + std::sqrt(0.3 * 0.8);
  EXPECT_NEAR(uhlmann_fidelity(a, b), root * root, 1e-12);
}

TEST(Metrics, MomentsMatchIndependentReference) {
  const nlohmann::json fx = testing::load_fixture("moments.json");
  for (const auto& c : fx.at("cases")) {
    const CMatrix u = testing::complex_matrix(c.at("target"));
    std::vector<CMatrix> ops;
    for (const auto& k : c.at("kraus")) ops.push_back(u.adjoint() * testing::complex_matrix(k));
    const KrausSet kraus = make_kraus_set(ops);
    const std::string name = c.at("name").get<std::string>();
    EXPECT_NEAR(avg_state_fidelity(kraus), c.at("mean").get<double>(), 1e-12) << name;
    EXPECT_NEAR(avg_state_fidelity_sq(kraus), c.at("mean_sq").get<double>(), 1e-12) << name;
  }
}

TEST(Metrics, ClosedFormMatchesPermutationOracle) {
  for (int d : {2, 4}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const KrausSet k = make_kraus_set(random_kraus(d, 1 + static_cast<int>(seed % 3), 100 * d + seed));
      EXPECT_NEAR(avg_state_fidelity(k), permutation_moment_oracle(k, 1), 1e-10);
      EXPECT_NEAR(avg_state_fidelity_sq(k), permutation_moment_oracle(k, 2), 1e-10);
    }
  }
}

TEST(Metrics, MonteCarloAgreesWithinStandardErrors) {
  const KrausSet k = make_kraus_set(random_kraus(2, 2, 77));
  const MonteCarloMoments mc = mc_state_fidelity_moments(k, 20000, 5, 2);
  EXPECT_EQ(mc.samples, 20000);
  EXPECT_LT(std::abs(mc.mean - avg_state_fidelity(k)), 4.0 * mc.mean_se);
  EXPECT_LT(std::abs(mc.mean_sq - avg_state_fidelity_sq(k)), 4.0 * mc.mean_sq_se);
  // Deterministic and independent of the thread count.
  const MonteCarloMoments again = mc_state_fidelity_moments(k, 20000, 5, 1);
  EXPECT_EQ(again.mean, mc.mean);
  EXPECT_EQ(again.mean_sq, mc.mean_sq);
}

TEST(Metrics, AverageStateFidelityIsLinearInProcessFidelity) {
  const UnitaryGate g = gate_library("cz");
  const BasisPtr basis = share(pauli_error_basis(g.matrix()));
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const ProcessMatrix chi = chi_from_kraus(random_kraus(4, 2, seed), basis);
    const double f = process_fidelity(chi, ideal_chi(g, basis));
    const double fst = avg_state_fidelity(kraus_from_chi(chi, g));
    EXPECT_NEAR(fst, avg_state_fidelity_from_process(f, 4), 1e-12);
    EXPECT_NEAR(avg_state_fidelity_from_process(f, 4), (4.0 * f + 1.0) / 5.0, 1e-15);
  }
}

TEST(Metrics, IdealGateHasNoFidelitySpread) {
  const UnitaryGate g = gate_library("toffoli");
  const BasisPtr basis = share(pauli_error_basis(g.matrix()));
  const ProcessMatrix ideal = ideal_chi(g, basis);
  EXPECT_NEAR(state_fidelity_std(ideal, g), 0.0, 1e-7);
  const FidelityReport r = fidelity_report(ideal, g);
  EXPECT_NEAR(r.process_fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.avg_state_fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.avg_state_fidelity_sq, 1.0, 1e-12);
}

TEST(Metrics, ReportMethodsAgree) {
  const UnitaryGate g = gate_library("cz");
  const BasisPtr basis = share(pauli_basis(2));
  const ProcessMatrix chi = chi_from_kraus(random_kraus(4, 2, 12), basis);
  const FidelityReport closed = fidelity_report(chi, g, MomentMethod::kClosedForm);
  const FidelityReport oracle = fidelity_report(chi, g, MomentMethod::kPermutationOracle);
  const FidelityReport mc = fidelity_report(chi, g, MomentMethod::kMonteCarlo, 20000, 3);
  EXPECT_NEAR(closed.avg_state_fidelity_sq, oracle.avg_state_fidelity_sq, 1e-10);
  EXPECT_LT(std::abs(mc.avg_state_fidelity - closed.avg_state_fidelity), 4.0 * mc.avg_state_fidelity_se);
  EXPECT_GT(closed.state_fidelity_std, 0.0);
  EXPECT_LT(closed.state_fidelity_std, 1.0 - closed.avg_state_fidelity);
  const nlohmann::json j = closed.to_json();
  EXPECT_EQ(j.at("method"), "closed_form");
  EXPECT_TRUE(j.contains("state_fidelity_std"));
}

}  // namespace
}  // namespace tomocs
