#include "dgd/tensor.hpp"

#include <stdexcept>
#include <string>

namespace dgd {

DynTensor::DynTensor(std::size_t n_nodes, std::size_t n_steps)
    : n_nodes_(n_nodes), slices_(n_steps, Matrix::Zero(n_nodes, n_nodes)) {}

DynTensor::DynTensor(std::vector<Matrix> slices) : slices_(std::move(slices)) {
  if (slices_.empty()) return;
  n_nodes_ = static_cast<std::size_t>(slices_[0].rows());
  for (std::size_t t = 0; t < slices_.size(); ++t) {
    const auto& s = slices_[t];
    if (s.rows() != s.cols() || static_cast<std::size_t>(s.rows()) != n_nodes_) {
      throw std::invalid_argument("DynTensor: slice " + std::to_string(t) +
                                  " is not " + std::to_string(n_nodes_) + "x" +
                                  std::to_string(n_nodes_));
    }
  }
}

const Matrix& DynTensor::slice(std::size_t t) const {
  if (t >= slices_.size()) throw std::out_of_range("DynTensor: slice index out of range");
  return slices_[t];
}

Matrix& DynTensor::slice(std::size_t t) {
  if (t >= slices_.size()) throw std::out_of_range("DynTensor: slice index out of range");
  return slices_[t];
}

bool DynTensor::is_symmetric(double tol) const {
  for (const auto& s : slices_) {
    if (((s - s.transpose()).array().abs() > tol).any()) return false;
  }
  return true;
}

bool DynTensor::is_hollow() const {
  for (const auto& s : slices_) {
    if ((s.diagonal().array() != 0.0).any()) return false;
  }
  return true;
}

bool DynTensor::is_nonnegative() const {
  for (const auto& s : slices_) {
    if ((s.array() < 0.0).any()) return false;
  }
  return true;
}

double DynTensor::squared_norm() const {
  double acc = 0.0;
  for (const auto& s : slices_) acc += s.squaredNorm();
  return acc;
}

DynTensor DynTensor::hadamard(const DynTensor& other) const {
  if (!same_shape(other)) throw std::invalid_argument("DynTensor::hadamard: shape mismatch");
  std::vector<Matrix> out(slices_.size());
  for (std::size_t t = 0; t < slices_.size(); ++t) {
    out[t] = slices_[t].cwiseProduct(other.slices_[t]);
  }
  DynTensor r(std::move(out));
  r.n_nodes_ = n_nodes_;
  return r;
}

bool DynTensor::operator==(const DynTensor& other) const {
  if (!same_shape(other)) return false;
  for (std::size_t t = 0; t < slices_.size(); ++t) {
    if (slices_[t] != other.slices_[t]) return false;
  }
  return true;
}

MaskTensor::MaskTensor(DynTensor values) : values_(std::move(values)) {
  for (std::size_t t = 0; t < values_.n_steps(); ++t) {
    const auto& s = values_[t];
    if (((s.array() != 0.0) && (s.array() != 1.0)).any()) {
      throw std::invalid_argument("MaskTensor: slice " + std::to_string(t) + " is not binary");
    }
    if (s != s.transpose()) {
      throw std::invalid_argument("MaskTensor: slice " + std::to_string(t) + " is not symmetric");
    }
  }
}

MaskTensor MaskTensor::ones(std::size_t n_nodes, std::size_t n_steps) {
  std::vector<Matrix> s(n_steps, Matrix::Ones(n_nodes, n_nodes));
  return MaskTensor(DynTensor(std::move(s)));
}

double MaskTensor::observed_count(std::size_t t) const { return values_.slice(t).sum(); }

SignalTensor::SignalTensor(std::vector<Matrix> slices) : slices_(std::move(slices)) {
  for (std::size_t t = 1; t < slices_.size(); ++t) {
    if (slices_[t].rows() != slices_[0].rows() || slices_[t].cols() != slices_[0].cols()) {
      throw std::invalid_argument("SignalTensor: slice " + std::to_string(t) + " has inconsistent shape");
    }
  }
  for (const auto& s : slices_) {
    if (!s.allFinite()) throw std::invalid_argument("SignalTensor: non-finite entry");
  }
}

bool SignalTensor::operator==(const SignalTensor& other) const {
  if (slices_.size() != other.slices_.size()) return false;
  for (std::size_t t = 0; t < slices_.size(); ++t) {
    if (slices_[t].rows() != other.slices_[t].rows() || slices_[t].cols() != other.slices_[t].cols() ||
        slices_[t] != other.slices_[t]) {
      return false;
    }
  }
  return true;
}

Vector vec_mat(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, std::size_t n) {
  if (static_cast<std::size_t>(v.size()) != n * n) {
    throw std::invalid_argument("unvec: vector of length " + std::to_string(v.size()) +
                                " cannot form a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  return Eigen::Map<const Matrix>(v.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

Flattenings build_flattenings(const DynTensor& adj, const MaskTensor& mask) {
  if (!adj.same_shape(mask.values())) throw std::invalid_argument("build_flattenings: shape mismatch");
  const auto n2 = static_cast<Eigen::Index>(adj.n_nodes() * adj.n_nodes());
  const auto T = static_cast<Eigen::Index>(adj.n_steps());
  Flattenings f{Matrix(n2, T), Matrix(n2, T), Vector(T)};
  for (Eigen::Index t = 0; t < T; ++t) {
    f.m0.col(t) = vec_mat(mask[t]);
    f.a_vec.col(t) = vec_mat(adj[t]);
    f.f_diag[t] = f.m0.col(t).sum();
  }
  return f;
}

Matrix stack_latent(std::span<const Matrix> latents) {
  if (latents.empty()) return {};
  const auto n = latents[0].rows();
  Matrix a0(n * n, static_cast<Eigen::Index>(latents.size()));
  for (std::size_t r = 0; r < latents.size(); ++r) {
    if (latents[r].rows() != n || latents[r].cols() != n) {
      throw std::invalid_argument("stack_latent: latent " + std::to_string(r) + " has inconsistent dimensions");
    }
    a0.col(static_cast<Eigen::Index>(r)) = vec_mat(latents[r]);
  }
  return a0;
}

}  // namespace dgd
