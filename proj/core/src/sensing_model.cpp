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
#include "tomocs/sensing_model.hpp"

#include <numeric>

#include <Eigen/Eigenvalues>

#include "tomocs/errors.hpp"
#include "tomocs/linalg.hpp"

namespace tomocs {

RVector SensingModel::predict(const CMatrix& chi) const {
  return apply(linalg::hermitian_to_real(chi));
}

DenseSensingModel::DenseSensingModel(BasisPtr basis, RMatrix a)
    : basis_(std::move(basis)), a_(std::move(a)) {
  if (a_.cols() != cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "sensing rows do not match the basis size");
  }
  row_space_ = a_.rows() <= a_.cols();
  const RMatrix gram = row_space_ ? RMatrix(a_ * a_.transpose()) : RMatrix(a_.transpose() * a_);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gram);
  eigvecs_ = es.eigenvectors();
  eigvals_ = es.eigenvalues().cwiseMax(0.0);
}

SensingModel::ShiftedImage SensingModel::solve_shifted_image(const RVector& q, const RVector& v, double h,
                                                             double gram_scale, double shift) const {
  const RMatrix r = q + h * adjoint(v);
  ShiftedImage out;
  out.x = solve_shifted(r, gram_scale, shift).col(0);
  out.ax = apply(out.x);
  return out;
}

RVector DenseSensingModel::apply(const RVector& x) const { return a_ * x; }

RVector DenseSensingModel::adjoint(const RVector& y) const { return a_.transpose() * y; }

RMatrix DenseSensingModel::solve_shifted(const RMatrix& r, double gram_scale, double shift) const {
  if (!(shift > 0.0)) throw Error(ErrorCode::kInvalidArgument, "shift must be positive");
  if (row_space_) {
    // (g A^T A + c I)^{-1} = (1/c) [I - g A^T (c I + g A A^T)^{-1} A]
    RMatrix t = eigvecs_.transpose() * (a_ * r);
    for (Eigen::Index i = 0; i < t.rows(); ++i) t.row(i) /= shift + gram_scale * eigvals_(i);
    return (r - gram_scale * (a_.transpose() * (eigvecs_ * t))) / shift;
  }
  RMatrix t = eigvecs_.transpose() * r;
  for (Eigen::Index i = 0; i < t.rows(); ++i) t.row(i) /= shift + gram_scale * eigvals_(i);
  return eigvecs_ * t;
}

SensingModel::ShiftedImage DenseSensingModel::solve_shifted_image(const RVector& q, const RVector& v, double h,
                                                                  double gram_scale, double shift) const {
  if (!row_space_) return SensingModel::solve_shifted_image(q, v, h, gram_scale, shift);
  if (!(shift > 0.0)) throw Error(ErrorCode::kInvalidArgument, "shift must be positive");
  // With r = q + h A^T v and A A^T = V L V^T:
  //   A r = A q + h V L V^T v,  t = D^{-1} V^T A r,  D = shift + gram_scale L,
  //   x   = (q + A^T (h v - gram_scale V t)) / shift,
  //   A x = (A r - gram_scale V L t) / shift.
  const RVector ar = a_ * q + h * (eigvecs_ * eigvals_.cwiseProduct(eigvecs_.transpose() * v));
  RVector t = eigvecs_.transpose() * ar;
  t.array() /= shift + gram_scale * eigvals_.array();
  ShiftedImage out;
  out.x = (q + a_.transpose() * (h * v - gram_scale * (eigvecs_ * t))) / shift;
  out.ax = (ar - gram_scale * (eigvecs_ * eigvals_.cwiseProduct(t))) / shift;
  return out;
}

FullDesignSensingModel::FullDesignSensingModel(const TomographyDesign& design, BasisPtr basis)
    : op_(design, std::move(basis)) {
  // Row r of A is the real form of b b^dagger, whose Frobenius norm is ||b||^2.
  for (Eigen::Index r = 0; r < op_.rows(); ++r) {
    const double nb = op_.row_vector(r).squaredNorm();
    frobenius_sq_ += nb * nb;
  }
}

RVector FullDesignSensingModel::apply(const RVector& x) const {
  const auto n = static_cast<Eigen::Index>(basis().size());
  return op_.apply(linalg::real_to_hermitian(x, n));
}

RVector FullDesignSensingModel::adjoint(const RVector& y) const {
  return linalg::hermitian_to_real(op_.adjoint(y));
}

RMatrix FullDesignSensingModel::solve_shifted(const RMatrix& r, double gram_scale,
                                              double shift) const {
  if (!(shift > 0.0)) throw Error(ErrorCode::kInvalidArgument, "shift must be positive");
  const auto n = static_cast<Eigen::Index>(basis().size());
  RMatrix out(r.rows(), r.cols());
  for (Eigen::Index c = 0; c < r.cols(); ++c) {
    const CMatrix h = linalg::real_to_hermitian(r.col(c), n);
    out.col(c) = linalg::hermitian_to_real(op_.solve_normal(h, gram_scale, shift));
  }
  return out;
}

SensingModelPtr make_sensing_model(const SensingMatrix& phi, std::span<const Eigen::Index> rows) {
  RMatrix a(static_cast<Eigen::Index>(rows.size()), phi.matrix().cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= phi.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "row index outside the sensing matrix");
    }
    a.row(static_cast<Eigen::Index>(i)) = phi.real_row(rows[i]).transpose();
  }
  return std::make_shared<DenseSensingModel>(phi.basis_ptr(), std::move(a));
}

SensingModelPtr make_sensing_model(const TomographyDesign& design, const BasisPtr& basis,
                                   std::span<const Eigen::Index> rows) {
  if (basis->dim() != design.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "basis and design dimensions differ");
  }
  bool full = static_cast<Eigen::Index>(rows.size()) == design.num_rows();
  for (std::size_t i = 0; full && i < rows.size(); ++i) {
    full = rows[i] == static_cast<Eigen::Index>(i);
  }
  if (full) return make_full_sensing_model(design, basis);
  for (const auto r : rows) {
    if (r < 0 || r >= design.num_rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "row index outside the design");
    }
  }
  const SensingOperator op(design, basis);
  return std::make_shared<DenseSensingModel>(basis, op.real_rows(rows));
}

SensingModelPtr make_full_sensing_model(const TomographyDesign& design, const BasisPtr& basis) {
  return std::make_shared<FullDesignSensingModel>(design, basis);
}

}  // namespace tomocs
