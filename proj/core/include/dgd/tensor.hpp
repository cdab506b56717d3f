#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dgd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense order-3 tensor stored as T square N x N frontal slices.
///
/// Used for adjacency tensors, reconstructions and (through MaskTensor)
/// observation masks. Slices are Eigen matrices, so vec() of a slice is its
/// column-major storage order.
class DynTensor {
 public:
  DynTensor() = default;
  DynTensor(std::size_t n_nodes, std::size_t n_steps);
  explicit DynTensor(std::vector<Matrix> slices);

  static DynTensor zeros(std::size_t n_nodes, std::size_t n_steps) {
    return DynTensor(n_nodes, n_steps);
  }

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_steps() const { return slices_.size(); }

  const Matrix& slice(std::size_t t) const;
  Matrix& slice(std::size_t t);
  const Matrix& operator[](std::size_t t) const { return slices_[t]; }
  Matrix& operator[](std::size_t t) { return slices_[t]; }

  const std::vector<Matrix>& slices() const { return slices_; }

  bool same_shape(const DynTensor& other) const {
    return n_nodes_ == other.n_nodes_ && n_steps() == other.n_steps();
  }

  bool is_symmetric(double tol = 0.0) const;
  bool is_hollow() const;
  bool is_nonnegative() const;

  /// Squared Frobenius norm over all slices.
  double squared_norm() const;

  /// Entrywise (Hadamard) product with another tensor of the same shape.
  DynTensor hadamard(const DynTensor& other) const;

  bool operator==(const DynTensor& other) const;

 private:
  std::size_t n_nodes_ = 0;
  std::vector<Matrix> slices_;
};

/// Binary, per-slice symmetric observation mask. A one marks a pair whose
/// edge or non-edge status is observed.
class MaskTensor {
 public:
  MaskTensor() = default;
  /// Throws std::invalid_argument if `values` is not binary and symmetric.
  explicit MaskTensor(DynTensor values);

  static MaskTensor ones(std::size_t n_nodes, std::size_t n_steps);

  std::size_t n_nodes() const { return values_.n_nodes(); }
  std::size_t n_steps() const { return values_.n_steps(); }
  const Matrix& operator[](std::size_t t) const { return values_[t]; }
  const DynTensor& values() const { return values_; }

  /// Number of observed entries (ones) in slice t, i.e. 1^T vec(M_t).
  double observed_count(std::size_t t) const;

  bool operator==(const MaskTensor& other) const { return values_ == other.values_; }

 private:
  DynTensor values_;
};

/// N x Q x T node-signal tensor, one N x Q feature matrix per time step.
class SignalTensor {
 public:
  SignalTensor() = default;
  explicit SignalTensor(std::vector<Matrix> slices);

  std::size_t n_nodes() const { return slices_.empty() ? 0 : static_cast<std::size_t>(slices_[0].rows()); }
  std::size_t n_feats() const { return slices_.empty() ? 0 : static_cast<std::size_t>(slices_[0].cols()); }
  std::size_t n_steps() const { return slices_.size(); }

  const Matrix& operator[](std::size_t t) const { return slices_[t]; }
  const std::vector<Matrix>& slices() const { return slices_; }

  bool operator==(const SignalTensor& other) const;

 private:
  std::vector<Matrix> slices_;
};

/// Column-stacked views of the data consumed by the block solvers.
struct Flattenings {
  Matrix m0;      // N^2 x T, column t = vec(M_t)
  Matrix a_vec;   // N^2 x T, column t = vec(A_t)
  Vector f_diag;  // length T, f_diag[t] = 1^T m0(:, t)
};

/// Stacks the columns of `m` into a single vector.
Vector vec_mat(const Matrix& m);

/// Inverse of vec_mat for an n x n matrix. Throws if v.size() != n*n.
Matrix unvec(const Vector& v, std::size_t n);

Flattenings build_flattenings(const DynTensor& adj, const MaskTensor& mask);

/// A_0 = [vec(A_1), ..., vec(A_R)].
Matrix stack_latent(std::span<const Matrix> latents);

}  // namespace dgd
