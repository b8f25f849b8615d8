#pragma once

// Seeded generators and comparison helpers shared by the test suites.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "omx/fock_core.hpp"

namespace omx::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  cplx complex_normal() { return {normal(), normal()}; }

  Vector vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  DenseMatrix matrix(Eigen::Index n) {
    DenseMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex_normal();
    return m;
  }

  StateVector state(const CompositeSpace& space) {
    return StateVector(space, vector(space.total_dim())).normalized();
  }

  Operator hermitian(const CompositeSpace& space) {
    const DenseMatrix m = matrix(space.total_dim());
    return Operator(space, SparseMatrix((0.5 * (m + m.adjoint())).sparseView()));
  }

  // Random mixed state: sum of `rank` weighted random pure states.
  DensityMatrix density(const CompositeSpace& space, int rank) {
    DenseMatrix rho = DenseMatrix::Zero(space.total_dim(), space.total_dim());
    double total = 0.0;
    for (int k = 0; k < rank; ++k) {
      const double w = uniform(0.1, 1.0);
      const Vector v = vector(space.total_dim()).normalized();
      rho += w * v * v.adjoint();
      total += w;
    }
    rho /= total;
    return DensityMatrix(space, 0.5 * (rho + rho.adjoint()));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const Operator& a, const Operator& b) {
  return max_abs(a.dense() - b.dense());
}

// Lowering operator built element by element from its definition.
inline DenseMatrix reference_lowering(int dim) {
  DenseMatrix b = DenseMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

// Kronecker product of dense matrices, first factor most significant.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// exp(A) by a Taylor series with scaling and squaring, for small test matrices.
inline DenseMatrix taylor_expm(const DenseMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const DenseMatrix s = a / std::pow(2.0, squarings);
  DenseMatrix term = DenseMatrix::Identity(a.rows(), a.cols());
  DenseMatrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * s / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

}  // namespace omx::test
