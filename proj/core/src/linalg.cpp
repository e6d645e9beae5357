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
#include "tomocs/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace tomocs::linalg {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

CMatrix hermitian_part(const CMatrix& x) {
  return 0.5 * (x + x.adjoint());
}

double hermiticity_residual(const CMatrix& x) {
  return (x - x.adjoint()).norm();
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  const CMatrix prod = u.adjoint() * u;
  return (prod - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

RVector hermitian_eigenvalues(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const CMatrix& x) {
  return hermitian_eigenvalues(x).minCoeff();
}

CMatrix project_psd(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
  const RVector lam = es.eigenvalues().cwiseMax(0.0);
  const CMatrix& v = es.eigenvectors();
  return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
}

CMatrix psd_sqrt(const CMatrix& x, double clip) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
  RVector lam = es.eigenvalues();
  for (auto& l : lam) l = l > clip ? std::sqrt(l) : 0.0;
  const CMatrix& v = es.eigenvectors();
  return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
}

CMatrix pd_inverse_sqrt(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
  RVector lam = es.eigenvalues();
  for (auto& l : lam) l = 1.0 / std::sqrt(l);
  const CMatrix& v = es.eigenvectors();
  return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
}

RVector hermitian_to_real(const CMatrix& x) {
  const Eigen::Index d = x.rows();
  RVector v(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < d; ++a) v[k++] = x(a, a).real();
  const double s = std::sqrt(2.0);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) {
      // Average the two triangles so slightly non-Hermitian input maps to
      // the coordinates of its Hermitian part.
      const Complex z = 0.5 * (x(a, b) + std::conj(x(b, a)));
      v[k++] = s * z.real();
      v[k++] = s * z.imag();
    }
  }
  return v;
}

CMatrix real_to_hermitian(const RVector& v, Eigen::Index d) {
  CMatrix x(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < d; ++a) x(a, a) = v[k++];
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) {
      const Complex z(s * v[k], s * v[k + 1]);
      k += 2;
      x(a, b) = z;
      x(b, a) = std::conj(z);
    }
  }
  return x;
}

}  // namespace tomocs::linalg
