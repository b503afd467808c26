#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace liecurve {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Dense rank-3 array with (i,j,k) indexing, i,j,k in [0,dim).
template <typename Scalar>
class Tensor3T {
 public:
  Tensor3T() : dim_(0) {}
  explicit Tensor3T(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim, Scalar(0)) {}

  int dim() const { return dim_; }
  Scalar& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
  const Scalar& operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }

  const std::vector<Scalar>& data() const { return data_; }
  std::vector<Scalar>& data() { return data_; }

  void setZero() { std::fill(data_.begin(), data_.end(), Scalar(0)); }

  double squaredNorm() const {
    double s = 0;
    for (const auto& v : data_) s += std::norm(Complex(v));
    return s;
  }
  double norm() const { return std::sqrt(squaredNorm()); }

  Tensor3T& operator+=(const Tensor3T& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3T& operator-=(const Tensor3T& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor3T& operator*=(Scalar a) {
    for (auto& v : data_) v *= a;
    return *this;
  }
  friend Tensor3T operator-(Tensor3T a, const Tensor3T& b) { return a -= b; }
  friend Tensor3T operator+(Tensor3T a, const Tensor3T& b) { return a += b; }

 private:
  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(i) * dim_ + j) * dim_ + k;
  }
  int dim_;
  std::vector<Scalar> data_;
};

using Tensor3 = Tensor3T<double>;
using CTensor3 = Tensor3T<Complex>;

}  // namespace liecurve
