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
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "tomocs/bases.hpp"
#include "tomocs/design.hpp"
#include "tomocs/sensing_operator.hpp"
#include "tomocs/types.hpp"

namespace tomocs {

/// Linear map A from real Hermitian coordinates of chi (see
/// linalg::hermitian_to_real) to the selected outcome probabilities, together
/// with the shifted normal-equation solves the estimators need.
class SensingModel {
 public:
  virtual ~SensingModel() = default;

  virtual const BasisPtr& basis_ptr() const = 0;
  const OperatorBasis& basis() const { return *basis_ptr(); }
  /// Number of selected probability rows m.
  virtual Eigen::Index rows() const = 0;
  /// Number of real coordinates, d^4.
  Eigen::Index cols() const {
    const auto n = static_cast<Eigen::Index>(basis().size());
    return n * n;
  }

  virtual RVector apply(const RVector& x) const = 0;
  virtual RVector adjoint(const RVector& y) const = 0;
  /// (gram_scale * A^T A + shift I)^{-1} applied to each column of \p r.
  virtual RMatrix solve_shifted(const RMatrix& r, double gram_scale, double shift) const = 0;

  /// x = (gram_scale * A^T A + shift I)^{-1} (q + h A^T v) together with A x.
  /// The default costs a shifted solve plus one adjoint and one apply;
  /// models with a cheaper fused form override it.
  struct ShiftedImage {
    RVector x;
    RVector ax;
  };
  virtual ShiftedImage solve_shifted_image(const RVector& q, const RVector& v, double h, double gram_scale,
                                           double shift) const;

  /// ||A||_F^2, used to scale solver penalties.
  virtual double frobenius_norm_sq() const = 0;

  /// Probabilities predicted for a chi matrix in this model's basis.
  RVector predict(const CMatrix& chi) const;
};

using SensingModelPtr = std::shared_ptr<const SensingModel>;

/// Explicit m x d^4 real matrix. Shifted solves use the eigendecomposition of
/// the smaller of A A^T and A^T A, computed once, so any shift is cheap.
class DenseSensingModel final : public SensingModel {
 public:
  DenseSensingModel(BasisPtr basis, RMatrix a);

  const BasisPtr& basis_ptr() const override { return basis_; }
  Eigen::Index rows() const override { return a_.rows(); }
  RVector apply(const RVector& x) const override;
  RVector adjoint(const RVector& y) const override;
  RMatrix solve_shifted(const RMatrix& r, double gram_scale, double shift) const override;
  /// With m <= n rows this needs only one pass over A and one over A^T.
  ShiftedImage solve_shifted_image(const RVector& q, const RVector& v, double h, double gram_scale,
                                   double shift) const override;
  double frobenius_norm_sq() const override { return a_.squaredNorm(); }

  const RMatrix& matrix() const { return a_; }

 private:
  BasisPtr basis_;
  RMatrix a_;
  bool row_space_;      // eigendecomposition of A A^T (m <= n) or of A^T A
  RMatrix eigvecs_;
  RVector eigvals_;
};

/// The complete design through the structured Kronecker operator; never
/// materializes A.
class FullDesignSensingModel final : public SensingModel {
 public:
  FullDesignSensingModel(const TomographyDesign& design, BasisPtr basis);

  const BasisPtr& basis_ptr() const override { return op_.basis_ptr(); }
  Eigen::Index rows() const override { return op_.rows(); }
  RVector apply(const RVector& x) const override;
  RVector adjoint(const RVector& y) const override;
  RMatrix solve_shifted(const RMatrix& r, double gram_scale, double shift) const override;
  double frobenius_norm_sq() const override { return frobenius_sq_; }

  const SensingOperator& sensing_operator() const { return op_; }

 private:
  SensingOperator op_;
  double frobenius_sq_ = 0.0;
};

/// Rows of a precomputed (for example disk-cached) sensing matrix.
SensingModelPtr make_sensing_model(const SensingMatrix& phi, std::span<const Eigen::Index> rows);
/// Chooses the structured model when every row is selected, else dense rows.
SensingModelPtr make_sensing_model(const TomographyDesign& design, const BasisPtr& basis,
                                   std::span<const Eigen::Index> rows);
SensingModelPtr make_full_sensing_model(const TomographyDesign& design, const BasisPtr& basis);

}  // namespace tomocs
