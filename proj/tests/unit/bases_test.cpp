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
#include "tomocs/bases.hpp"

#include <gtest/gtest.h>

#include "tomocs/channel.hpp"
#include "tomocs/errors.hpp"

namespace tomocs {
namespace {

struct BasisCase {
  BasisLabel label;
  int num_qubits;
};

class BasisProperties : public ::testing::TestWithParam<BasisCase> {};

OperatorBasis build(const BasisCase& c) {
  const UnitaryGate gate = c.num_qubits == 3 ? gate_library("toffoli")
                           : c.num_qubits == 2 ? gate_library("cz")
                                               : gate_library("identity1");
  return make_basis(c.label, gate.dim(), gate.matrix());
}

TEST_P(BasisProperties, ElementsAreOrthogonalWithDeclaredNormalization) {
  const OperatorBasis basis = build(GetParam());
  const int d = basis.dim();
  ASSERT_EQ(basis.size(), static_cast<std::size_t>(d * d));
  const CMatrix gram = basis.gram();
  const CMatrix expected = basis.normalization() * CMatrix::Identity(gram.rows(), gram.cols());
  EXPECT_LT((gram - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_P(BasisProperties, CoefficientsReconstructOperators) {
  const OperatorBasis basis = build(GetParam());
  const int d = basis.dim();
  CMatrix x(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = Complex(std::sin(1.0 + i + 3 * j), std::cos(2.0 * i - j));
  }
  const CVector c = basis.coefficients(x);
  CMatrix back = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < basis.size(); ++a) back += c(static_cast<Eigen::Index>(a)) * basis[a];
  EXPECT_LT((back - x).norm(), 1e-11);
}

TEST_P(BasisProperties, JsonRoundTripIsExact) {
  const OperatorBasis basis = build(GetParam());
  const OperatorBasis back = basis_from_json(to_json(basis));
  EXPECT_TRUE(back.same_as(basis));
  EXPECT_EQ(back.label(), basis.label());
}

INSTANTIATE_TEST_SUITE_P(
    AllBases, BasisProperties,
    ::testing::Values(BasisCase{BasisLabel::kPauli, 1}, BasisCase{BasisLabel::kPauli, 2},
                      BasisCase{BasisLabel::kPauliError, 2}, BasisCase{BasisLabel::kNatural, 2},
                      BasisCase{BasisLabel::kSvd, 2}, BasisCase{BasisLabel::kPauliError, 3},
                      BasisCase{BasisLabel::kSvd, 3}),
    [](const ::testing::TestParamInfo<BasisCase>& info) {
      std::string name(to_string(info.param.label));
      name.erase(std::remove(name.begin(), name.end(), '-'), name.end());
      return name + std::to_string(info.param.num_qubits) + "q";
    });

TEST(Bases, PauliOrderingIsLexicographicWithFirstQubitMostSignificant) {
  const OperatorBasis b = pauli_basis(2);
  // Index 1 = I (x) X, index 4 = X (x) I.
  CMatrix ix = CMatrix::Zero(4, 4);
  ix(0, 1) = ix(1, 0) = ix(2, 3) = ix(3, 2) = 1.0;
  EXPECT_LT((b[1] - ix).norm(), 1e-15);
  CMatrix xi = CMatrix::Zero(4, 4);
  xi(0, 2) = xi(2, 0) = xi(1, 3) = xi(3, 1) = 1.0;
  EXPECT_LT((b[4] - xi).norm(), 1e-15);
}

TEST(Bases, PauliErrorBasisStartsWithTheGate) {
  const UnitaryGate cz = gate_library("cz");
  const OperatorBasis b = pauli_error_basis(cz.matrix());
  EXPECT_LT((b[0] - cz.matrix()).norm(), 1e-15);
  EXPECT_EQ(b.normalization(), 4.0);
}

TEST(Bases, SvdBasisFirstElementIsNormalizedGate) {
  for (const char* name : {"cz", "toffoli"}) {
    const UnitaryGate g = gate_library(name);
    const OperatorBasis b = svd_basis(g.matrix());
    EXPECT_EQ(b.normalization(), 1.0);
    const double d = g.dim();
    // Equal up to a global phase.
    const Complex overlap = (b[0].adjoint() * g.matrix()).trace() / std::sqrt(d);
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-12) << name;
  }
}

TEST(Bases, NaturalBasisUsesColumnStacking) {
  const OperatorBasis b = natural_basis(2);
  // alpha = i + d * j holds the unit at (i, j).
  EXPECT_EQ(b[1](1, 0), Complex(1.0));
  EXPECT_EQ(b[2](0, 1), Complex(1.0));
}

TEST(Bases, TransformsComposeAndInvert) {
  const UnitaryGate g = gate_library("cz");
  const OperatorBasis pauli = pauli_basis(2);
  const OperatorBasis err = pauli_error_basis(g.matrix());
  const OperatorBasis svd = svd_basis(g.matrix());
  const auto p2e = basis_transform(pauli, err);
  const auto e2s = basis_transform(err, svd);
  const auto s2p = basis_transform(svd, pauli);
  const auto loop = compose(compose(p2e, e2s), s2p);
  CMatrix chi = CMatrix::Zero(16, 16);
  chi(0, 0) = 0.7;
  chi(3, 3) = 0.3;
  chi(0, 3) = Complex(0.1, 0.2);
  chi(3, 0) = std::conj(chi(0, 3));
  EXPECT_LT((loop.apply(chi) - chi).norm(), 1e-12);
  EXPECT_THROW(compose(p2e, p2e), Error);
}

TEST(Bases, LabelsParseAndPrint) {
  for (auto label : {BasisLabel::kPauli, BasisLabel::kPauliError, BasisLabel::kNatural, BasisLabel::kSvd}) {
    EXPECT_EQ(parse_basis_label(to_string(label)), label);
  }
  EXPECT_THROW(parse_basis_label("gell-mann"), Error);
}

TEST(Bases, AnchoredBasesRequireAUnitary) {
  EXPECT_THROW(make_basis(BasisLabel::kSvd, 4, std::nullopt), Error);
  EXPECT_THROW(pauli_error_basis(2.0 * CMatrix::Identity(4, 4)), Error);
  EXPECT_THROW(pauli_basis(4), Error);
}

}  // namespace
}  // namespace tomocs
