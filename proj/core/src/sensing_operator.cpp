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
#include "tomocs/sensing_operator.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "tomocs/errors.hpp"
#include "tomocs/linalg.hpp"

namespace tomocs {
namespace {

// Flat row-major tensor, slot 0 slowest.
struct Tensor {
  std::vector<Eigen::Index> dims;
  CVector data;
};

// out[.., i, ..] = sum_j m(i, j) in[.., j, ..] along slot s.
Tensor mode_product(const Tensor& in, std::size_t s, const CMatrix& m) {
  Eigen::Index outer = 1;
  Eigen::Index inner = 1;
  for (std::size_t k = 0; k < s; ++k) outer *= in.dims[k];
  for (std::size_t k = s + 1; k < in.dims.size(); ++k) inner *= in.dims[k];
  const Eigen::Index n_in = in.dims[s];
  const Eigen::Index n_out = m.rows();
  Tensor out;
  out.dims = in.dims;
  out.dims[s] = n_out;
  out.data = CVector::Zero(outer * n_out * inner);
  for (Eigen::Index o = 0; o < outer; ++o) {
    // Block (n_in x inner) row-major == (inner x n_in) column-major.
    const Eigen::Map<const CMatrix> src(in.data.data() + o * n_in * inner, inner, n_in);
    Eigen::Map<CMatrix> dst(out.data.data() + o * n_out * inner, inner, n_out);
    dst.noalias() = src * m.transpose();
  }
  return out;
}

CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

}  // namespace

SensingOperator::SensingOperator(const TomographyDesign& design, BasisPtr basis)
    : basis_(std::move(basis)),
      num_qubits_(design.num_qubits()),
      dim_(design.dim()),
      num_rows_(design.num_rows()),
      num_settings_(design.num_settings()) {
  if (basis_->dim() != design.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "basis and design dimensions differ");
  }
  for (int k = 0; k < design.num_inputs(); ++k) inputs_.push_back(design.input_vector(k));
  for (int r = 0; r < design.num_settings(); ++r) {
    for (int o = 0; o < design.num_outcomes(); ++o) measured_.push_back(design.measured_vector(r, o));
  }
  w_ = basis_->vectorized() / std::sqrt(basis_->normalization());

  const auto& q_in = TomographyDesign::qubit_inputs();
  const auto& q_rot = TomographyDesign::qubit_rotations();
  input_map_.resize(TomographyDesign::kInputsPerQubit, 4);
  for (int c = 0; c < TomographyDesign::kInputsPerQubit; ++c) {
    const CVector& psi = q_in[static_cast<std::size_t>(c)];
    const CMatrix rho_t = (psi * psi.adjoint()).transpose();
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) input_map_(c, 2 * b + a) = rho_t(a, b);
    }
  }
  output_map_.resize(2 * TomographyDesign::kSettingsPerQubit, 4);
  for (int r = 0; r < TomographyDesign::kSettingsPerQubit; ++r) {
    for (int o = 0; o < 2; ++o) {
      const CVector phi = q_rot[static_cast<std::size_t>(r)].adjoint().col(o);
      const CMatrix pi = phi * phi.adjoint();
      for (int b = 0; b < 2; ++b) {
        for (int a = 0; a < 2; ++a) output_map_(2 * r + o, 2 * b + a) = pi(a, b);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es_in(input_map_.adjoint() * input_map_);
  input_eigvecs_ = es_in.eigenvectors();
  input_eigvals_ = es_in.eigenvalues().cwiseMax(0.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es_out(output_map_.adjoint() * output_map_);
  output_eigvecs_ = es_out.eigenvectors();
  output_eigvals_ = es_out.eigenvalues().cwiseMax(0.0);

  // Contracted tensor has shape [4]*N ++ [6]*N.
  const int n = num_qubits_;
  Eigen::Index total = 1;
  for (int s = 0; s < 2 * n; ++s) total *= (s < n ? 4 : 6);
  row_of_tensor_.resize(static_cast<std::size_t>(total));
  for (Eigen::Index t = 0; t < total; ++t) {
    Eigen::Index rem = t;
    std::vector<int> c(static_cast<std::size_t>(2 * n));
    for (int s = 2 * n - 1; s >= 0; --s) {
      const int radix = s < n ? 4 : 6;
      c[static_cast<std::size_t>(s)] = static_cast<int>(rem % radix);
      rem /= radix;
    }
    Eigen::Index k = 0;
    Eigen::Index r = 0;
    Eigen::Index o = 0;
    for (int q = 0; q < n; ++q) {
      k = k * 4 + c[static_cast<std::size_t>(q)];
      const int co = c[static_cast<std::size_t>(n + q)];
      r = r * 3 + co / 2;
      o = o * 2 + co % 2;
    }
    row_of_tensor_[static_cast<std::size_t>(t)] = (k * num_settings_ + r) * dim_ + o;
  }
}

CMatrix SensingOperator::to_choi(const CMatrix& chi) const {
  return basis_->normalization() * (w_ * chi * w_.adjoint());
}

CMatrix SensingOperator::from_choi(const CMatrix& j) const {
  return basis_->normalization() * (w_.adjoint() * j * w_);
}

namespace {

// J (d^2 x d^2) <-> tensor with per-slot index 2 b_s + a_s (b row bit, a column bit).
Tensor choi_to_tensor(const CMatrix& j, int slots) {
  Tensor t;
  t.dims.assign(static_cast<std::size_t>(slots), 4);
  const Eigen::Index n = j.rows();
  t.data.resize(n * n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      Eigen::Index idx = 0;
      for (int s = 0; s < slots; ++s) {
        const int shift = slots - 1 - s;
        idx = idx * 4 + 2 * ((b >> shift) & 1) + ((a >> shift) & 1);
      }
      t.data[idx] = j(b, a);
    }
  }
  return t;
}

CMatrix tensor_to_choi(const Tensor& t, int slots) {
  const Eigen::Index n = Eigen::Index{1} << slots;
  CMatrix j(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      Eigen::Index idx = 0;
      for (int s = 0; s < slots; ++s) {
        const int shift = slots - 1 - s;
        idx = idx * 4 + 2 * ((b >> shift) & 1) + ((a >> shift) & 1);
      }
      j(b, a) = t.data[idx];
    }
  }
  return j;
}

}  // namespace

RVector SensingOperator::apply(const CMatrix& chi) const {
  const int slots = 2 * num_qubits_;
  Tensor t = choi_to_tensor(to_choi(chi), slots);
  for (int s = 0; s < slots; ++s) {
    t = mode_product(t, static_cast<std::size_t>(s), s < num_qubits_ ? input_map_ : output_map_);
  }
  RVector p(num_rows_);
  for (std::size_t i = 0; i < row_of_tensor_.size(); ++i) {
    p[row_of_tensor_[i]] = t.data[static_cast<Eigen::Index>(i)].real();
  }
  return p;
}

CMatrix SensingOperator::adjoint(const RVector& y) const {
  if (y.size() != num_rows_) {
    throw Error(ErrorCode::kDimensionMismatch, "adjoint input has wrong length");
  }
  const int slots = 2 * num_qubits_;
  Tensor t;
  for (int s = 0; s < slots; ++s) t.dims.push_back(s < num_qubits_ ? 4 : 6);
  t.data.resize(static_cast<Eigen::Index>(row_of_tensor_.size()));
  for (std::size_t i = 0; i < row_of_tensor_.size(); ++i) {
    t.data[static_cast<Eigen::Index>(i)] = y[row_of_tensor_[i]];
  }
  const CMatrix in_h = input_map_.adjoint();
  const CMatrix out_h = output_map_.adjoint();
  for (int s = 0; s < slots; ++s) {
    t = mode_product(t, static_cast<std::size_t>(s), s < num_qubits_ ? in_h : out_h);
  }
  return linalg::hermitian_part(from_choi(tensor_to_choi(t, slots)));
}

CMatrix SensingOperator::solve_normal(const CMatrix& r, double gram_scale, double shift) const {
  const int slots = 2 * num_qubits_;
  const double q = basis_->normalization();
  const CMatrix rhat = w_ * r * w_.adjoint();
  Tensor t = choi_to_tensor(rhat, slots);
  const CMatrix in_vh = input_eigvecs_.adjoint();
  const CMatrix out_vh = output_eigvecs_.adjoint();
  for (int s = 0; s < slots; ++s) {
    t = mode_product(t, static_cast<std::size_t>(s), s < num_qubits_ ? in_vh : out_vh);
  }
  // Divide by gram_scale * Q^2 * prod_s lambda_s + shift.
  for (Eigen::Index idx = 0; idx < t.data.size(); ++idx) {
    Eigen::Index rem = idx;
    double lam = 1.0;
    for (int s = slots - 1; s >= 0; --s) {
      const auto m = rem % 4;
      rem /= 4;
      lam *= s < num_qubits_ ? input_eigvals_[m] : output_eigvals_[m];
    }
    t.data[idx] /= gram_scale * q * q * lam + shift;
  }
  for (int s = 0; s < slots; ++s) {
    t = mode_product(t, static_cast<std::size_t>(s), s < num_qubits_ ? input_eigvecs_ : output_eigvecs_);
  }
  const CMatrix chat = tensor_to_choi(t, slots);
  return linalg::hermitian_part(w_.adjoint() * chat * w_);
}

CVector SensingOperator::row_vector(Eigen::Index row) const {
  const Eigen::Index outcomes = dim_;
  const Eigen::Index config = row / outcomes;
  const Eigen::Index o = row % outcomes;
  const Eigen::Index k = config / num_settings_;
  const Eigen::Index r = config % num_settings_;
  const CVector& psi = inputs_[static_cast<std::size_t>(k)];
  const CVector& phi = measured_[static_cast<std::size_t>(r * outcomes + o)];
  const CVector u = kron_vec(psi.conjugate(), phi);
  return basis_->vectorized().adjoint() * u;
}

RMatrix SensingOperator::real_rows(std::span<const Eigen::Index> rows) const {
  const auto n = static_cast<Eigen::Index>(basis_->size());
  RMatrix out(static_cast<Eigen::Index>(rows.size()), n * n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CVector b = row_vector(rows[i]);
    out.row(static_cast<Eigen::Index>(i)) = linalg::hermitian_to_real(b * b.adjoint()).transpose();
  }
  return out;
}

}  // namespace tomocs
