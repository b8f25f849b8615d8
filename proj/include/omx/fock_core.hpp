#pragma once

// Truncated bosonic Hilbert spaces, mode operators and states.
//
// A CompositeSpace is an ordered list of modes, each truncated to its lowest
// `dim` Fock levels. The first mode is the most significant index of the
// tensor product, so a composite basis index is ((n0 * d1 + n1) * d2 + n2)...
// Operators are stored sparse (row-major); states and density matrices dense.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace omx {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-8;

class CompositeSpace {
 public:
  CompositeSpace(std::vector<int> dims, std::vector<std::string> labels);

  static CompositeSpace single(int dim, std::string label = "mech");

  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_modes() const { return dims_.size(); }
  Eigen::Index total_dim() const { return total_; }

  bool has_mode(std::string_view label) const;
  // Throws InvalidArgument naming the valid labels.
  std::size_t index_of(std::string_view label) const;
  int dim_of(std::string_view label) const { return dims_[index_of(label)]; }

  // Space spanned by the given modes, in this space's mode order.
  CompositeSpace subspace(const std::vector<std::string>& keep) const;

  // Fock occupations of a composite basis index.
  std::vector<int> occupations(Eigen::Index index) const;
  Eigen::Index index_for(const std::vector<int>& occupations) const;

  std::string describe() const;

  bool operator==(const CompositeSpace&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  Eigen::Index total_ = 1;
};

// Raised when an amplitude is too large for a mode's truncation. Returned as
// data on states and operators; never printed.
struct TruncationWarning {
  std::string mode;
  int dim = 0;
  double recommended_dim = 0.0;
};

// Smallest truncation considered safe for a coherent amplitude.
double recommended_dim(double amplitude_abs);

class Operator {
 public:
  Operator(CompositeSpace space, SparseMatrix matrix);

  const CompositeSpace& space() const { return space_; }
  const SparseMatrix& matrix() const { return matrix_; }
  DenseMatrix dense() const { return DenseMatrix(matrix_); }
  Eigen::Index dim() const { return matrix_.rows(); }

  // max|A - A^dagger| / max|A| (0 for the zero operator).
  double hermiticity_error() const;
  double max_abs() const;

  bool tagged_hermitian() const { return hermitian_; }
  // Verifies the Hermiticity invariant and sets the tag; throws
  // InvariantViolation if it does not hold.
  Operator& tag_hermitian();

  const std::vector<TruncationWarning>& warnings() const { return warnings_; }
  Operator& add_warning(TruncationWarning w);

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(cplx c);

 private:
  CompositeSpace space_;
  SparseMatrix matrix_;
  bool hermitian_ = false;
  std::vector<TruncationWarning> warnings_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(cplx c, Operator a);
Operator operator*(const Operator& a, const Operator& b);

Operator identity(const CompositeSpace& space);
Operator zero_operator(const CompositeSpace& space);

// I (x) ... (x) local (x) ... (x) I with `local` acting on `mode`.
Operator embed(const CompositeSpace& space, std::string_view mode, const DenseMatrix& local);
Operator embed(const CompositeSpace& space, std::string_view mode, const SparseMatrix& local);
Operator diagonal_operator(const CompositeSpace& space, std::string_view mode,
                           const std::vector<double>& diagonal);

Operator mode_annihilation(const CompositeSpace& space, std::string_view mode);
Operator mode_creation(const CompositeSpace& space, std::string_view mode);
Operator number_operator(const CompositeSpace& space, std::string_view mode);
// x = (b + b^dagger)/sqrt2, y = (b - b^dagger)/(i sqrt2).
Operator quadrature_x(const CompositeSpace& space, std::string_view mode);
Operator quadrature_y(const CompositeSpace& space, std::string_view mode);

Operator adjoint(const Operator& a);
Operator compose(const Operator& a, const Operator& b);
// c * a + b
Operator add_scaled(cplx c, const Operator& a, const Operator& b);
Operator commutator(const Operator& a, const Operator& b);
Operator power(const Operator& a, int exponent);

// Dense matrix exponential exp(A) by scaling and squaring with a Pade
// approximant.
Operator expm(const Operator& a);

// D(xi) = exp(xi b^dagger - conj(xi) b) on `mode`.
Operator displacement_operator(const CompositeSpace& space, std::string_view mode, cplx xi);

class StateVector {
 public:
  StateVector(CompositeSpace space, Vector amplitudes, bool normalized = false);

  const CompositeSpace& space() const { return space_; }
  const Vector& amplitudes() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }
  double norm() const { return amps_.norm(); }
  bool tagged_normalized() const { return normalized_; }

  StateVector normalized() const;

  const std::vector<TruncationWarning>& warnings() const { return warnings_; }
  StateVector& add_warning(TruncationWarning w);

 private:
  CompositeSpace space_;
  Vector amps_;
  bool normalized_ = false;
  std::vector<TruncationWarning> warnings_;
};

class DensityMatrix {
 public:
  DensityMatrix(CompositeSpace space, DenseMatrix matrix);
  static DensityMatrix from_pure(const StateVector& psi);

  const CompositeSpace& space() const { return space_; }
  const DenseMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  cplx trace() const { return matrix_.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  // Hermitian to 1e-12, unit trace to 1e-8, min eigenvalue >= -1e-8.
  bool is_physical() const;

 private:
  CompositeSpace space_;
  DenseMatrix matrix_;
};

StateVector fock_state(const CompositeSpace& space, const std::vector<int>& occupations);
StateVector vacuum(const CompositeSpace& space);

// Unnormalized coefficients exp(-|a|^2/2) a^n / sqrt(n!), n < dim.
Vector coherent_amplitudes(int dim, cplx alpha);
// Coherent state on `mode`, vacuum elsewhere; renormalized after truncation.
StateVector coherent_state(const CompositeSpace& space, std::string_view mode, cplx alpha);
// Tensor product of one vector per mode (in mode order), normalized.
StateVector product_state(const CompositeSpace& space, const std::vector<Vector>& factors);

cplx expectation(const StateVector& psi, const Operator& a);
cplx expectation(const DensityMatrix& rho, const Operator& a);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
// Reduced state of a pure state without forming the full density matrix.
DensityMatrix partial_trace(const StateVector& psi, const std::vector<std::string>& keep);

void require_same_space(const CompositeSpace& a, const CompositeSpace& b, std::string_view what);

}  // namespace omx
