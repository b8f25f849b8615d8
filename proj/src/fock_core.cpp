#include "omx/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "omx/errors.hpp"

namespace omx {

// ----------------------------------------------------------------------------
// CompositeSpace

CompositeSpace::CompositeSpace(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) throw InvalidArgument("CompositeSpace: at least one mode required");
  if (dims_.size() != labels_.size())
    throw InvalidArgument("CompositeSpace: dims and labels differ in length");
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] < 2)
      throw InvalidArgument("CompositeSpace: mode '" + labels_[k] + "' has dimension < 2");
    for (std::size_t l = 0; l < k; ++l)
      if (labels_[l] == labels_[k])
        throw InvalidArgument("CompositeSpace: duplicate mode label '" + labels_[k] + "'");
    total_ *= dims_[k];
  }
}

CompositeSpace CompositeSpace::single(int dim, std::string label) {
  return CompositeSpace({dim}, {std::move(label)});
}

bool CompositeSpace::has_mode(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t CompositeSpace::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    std::string valid;
    for (const auto& l : labels_) valid += (valid.empty() ? "" : ", ") + l;
    throw InvalidArgument("unknown mode '" + std::string(label) + "'; valid modes: " + valid);
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

CompositeSpace CompositeSpace::subspace(const std::vector<std::string>& keep) const {
  if (keep.empty()) throw InvalidArgument("subspace: empty mode set");
  std::vector<bool> chosen(dims_.size(), false);
  for (const auto& label : keep) chosen[index_of(label)] = true;
  std::vector<int> d;
  std::vector<std::string> l;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (chosen[k]) {
      d.push_back(dims_[k]);
      l.push_back(labels_[k]);
    }
  }
  return CompositeSpace(std::move(d), std::move(l));
}

std::vector<int> CompositeSpace::occupations(Eigen::Index index) const {
  std::vector<int> n(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    n[k] = static_cast<int>(index % dims_[k]);
    index /= dims_[k];
  }
  return n;
}

Eigen::Index CompositeSpace::index_for(const std::vector<int>& occupations) const {
  if (occupations.size() != dims_.size())
    throw InvalidArgument("index_for: occupation list length differs from mode count");
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= dims_[k])
      throw InvalidArgument("index_for: occupation out of range for mode '" + labels_[k] + "'");
    idx = idx * dims_[k] + occupations[k];
  }
  return idx;
}

std::string CompositeSpace::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < dims_.size(); ++k)
    os << (k ? " x " : "") << labels_[k] << "[" << dims_[k] << "]";
  return os.str();
}

void require_same_space(const CompositeSpace& a, const CompositeSpace& b, std::string_view what) {
  if (!(a == b))
    throw SpaceMismatch(std::string(what) + ": space mismatch (" + a.describe() + " vs " +
                        b.describe() + ")");
}

double recommended_dim(double amplitude_abs) {
  return amplitude_abs * amplitude_abs + 6.0 * amplitude_abs + 10.0;
}

// ----------------------------------------------------------------------------
// Operator

Operator::Operator(CompositeSpace space, SparseMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim())
    throw InvalidArgument("Operator: matrix shape does not match space " + space_.describe());
  matrix_.makeCompressed();
}

double Operator::max_abs() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double Operator::hermiticity_error() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double m = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m / scale;
}

Operator& Operator::tag_hermitian() {
  const double err = hermiticity_error();
  if (err > kHermitianTolerance)
    throw InvariantViolation("operator tagged Hermitian has relative anti-Hermitian part " +
                             std::to_string(err));
  hermitian_ = true;
  return *this;
}

Operator& Operator::add_warning(TruncationWarning w) {
  warnings_.push_back(std::move(w));
  return *this;
}

Operator& Operator::operator+=(const Operator& other) {
  require_same_space(space_, other.space_, "operator +");
  matrix_ += other.matrix_;
  hermitian_ = false;
  warnings_.insert(warnings_.end(), other.warnings_.begin(), other.warnings_.end());
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_space(space_, other.space_, "operator -");
  matrix_ -= other.matrix_;
  hermitian_ = false;
  warnings_.insert(warnings_.end(), other.warnings_.begin(), other.warnings_.end());
  return *this;
}

Operator& Operator::operator*=(cplx c) {
  matrix_ *= c;
  if (c.imag() != 0.0) hermitian_ = false;
  return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }
Operator operator*(cplx c, Operator a) { return a *= c; }
Operator operator*(const Operator& a, const Operator& b) { return compose(a, b); }

Operator identity(const CompositeSpace& space) {
  SparseMatrix m(space.total_dim(), space.total_dim());
  m.setIdentity();
  Operator op(space, std::move(m));
  op.tag_hermitian();
  return op;
}

Operator zero_operator(const CompositeSpace& space) {
  return Operator(space, SparseMatrix(space.total_dim(), space.total_dim()));
}

Operator embed(const CompositeSpace& space, std::string_view mode, const SparseMatrix& local) {
  const std::size_t k = space.index_of(mode);
  const int d = space.dims()[k];
  if (local.rows() != d || local.cols() != d)
    throw InvalidArgument("embed: local matrix has wrong dimension for mode '" +
                          std::string(mode) + "'");
  Eigen::Index pre = 1, post = 1;
  for (std::size_t j = 0; j < k; ++j) pre *= space.dims()[j];
  for (std::size_t j = k + 1; j < space.num_modes(); ++j) post *= space.dims()[j];

  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(pre * post * local.nonZeros()));
  for (Eigen::Index p = 0; p < pre; ++p)
    for (Eigen::Index r = 0; r < local.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(local, r); it; ++it)
        for (Eigen::Index q = 0; q < post; ++q)
          triplets.emplace_back((p * d + it.row()) * post + q, (p * d + it.col()) * post + q,
                                it.value());
  SparseMatrix m(space.total_dim(), space.total_dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(space, std::move(m));
}

Operator embed(const CompositeSpace& space, std::string_view mode, const DenseMatrix& local) {
  SparseMatrix s = local.sparseView(0.0, 0.0);
  return embed(space, mode, s);
}

Operator diagonal_operator(const CompositeSpace& space, std::string_view mode,
                           const std::vector<double>& diagonal) {
  const int d = space.dim_of(mode);
  if (static_cast<int>(diagonal.size()) != d)
    throw InvalidArgument("diagonal_operator: length differs from mode dimension");
  SparseMatrix local(d, d);
  local.reserve(Eigen::VectorXi::Constant(d, 1));
  for (int n = 0; n < d; ++n) local.insert(n, n) = diagonal[static_cast<std::size_t>(n)];
  Operator op = embed(space, mode, local);
  op.tag_hermitian();
  return op;
}

namespace {

SparseMatrix local_lowering(int d) {
  SparseMatrix b(d, d);
  b.reserve(Eigen::VectorXi::Constant(d, 1));
  for (int n = 1; n < d; ++n) b.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

}  // namespace

Operator mode_annihilation(const CompositeSpace& space, std::string_view mode) {
  return embed(space, mode, local_lowering(space.dim_of(mode)));
}

Operator mode_creation(const CompositeSpace& space, std::string_view mode) {
  SparseMatrix b = local_lowering(space.dim_of(mode));
  return embed(space, mode, SparseMatrix(b.adjoint()));
}

Operator number_operator(const CompositeSpace& space, std::string_view mode) {
  const int d = space.dim_of(mode);
  std::vector<double> diag(static_cast<std::size_t>(d));
  std::iota(diag.begin(), diag.end(), 0.0);
  return diagonal_operator(space, mode, diag);
}

Operator quadrature_x(const CompositeSpace& space, std::string_view mode) {
  Operator b = mode_annihilation(space, mode);
  Operator x = (1.0 / std::sqrt(2.0)) * (b + adjoint(b));
  x.tag_hermitian();
  return x;
}

Operator quadrature_y(const CompositeSpace& space, std::string_view mode) {
  Operator b = mode_annihilation(space, mode);
  Operator y = cplx(0.0, -1.0 / std::sqrt(2.0)) * (b - adjoint(b));
  y.tag_hermitian();
  return y;
}

Operator adjoint(const Operator& a) {
  Operator out(a.space(), SparseMatrix(a.matrix().adjoint()));
  for (const auto& w : a.warnings()) out.add_warning(w);
  if (a.tagged_hermitian()) out.tag_hermitian();
  return out;
}

Operator compose(const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "compose");
  Operator out(a.space(), SparseMatrix(a.matrix() * b.matrix()));
  for (const auto& w : a.warnings()) out.add_warning(w);
  for (const auto& w : b.warnings()) out.add_warning(w);
  return out;
}

Operator add_scaled(cplx c, const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "add_scaled");
  return c * a + b;
}

Operator commutator(const Operator& a, const Operator& b) { return compose(a, b) - compose(b, a); }

Operator power(const Operator& a, int exponent) {
  if (exponent < 0) throw InvalidArgument("power: negative exponent");
  Operator out = identity(a.space());
  for (int k = 0; k < exponent; ++k) out = compose(out, a);
  return out;
}

Operator expm(const Operator& a) {
  DenseMatrix e = a.dense().exp();
  return Operator(a.space(), e.sparseView(0.0, 0.0));
}

Operator displacement_operator(const CompositeSpace& space, std::string_view mode, cplx xi) {
  const int d = space.dim_of(mode);
  SparseMatrix b = local_lowering(d);
  DenseMatrix gen = xi * DenseMatrix(SparseMatrix(b.adjoint())) - std::conj(xi) * DenseMatrix(b);
  DenseMatrix local = gen.exp();
  Operator op = embed(space, mode, local);
  if (d < recommended_dim(std::abs(xi)))
    op.add_warning({std::string(mode), d, recommended_dim(std::abs(xi))});
  return op;
}

// ----------------------------------------------------------------------------
// StateVector / DensityMatrix

StateVector::StateVector(CompositeSpace space, Vector amplitudes, bool normalized)
    : space_(std::move(space)), amps_(std::move(amplitudes)), normalized_(normalized) {
  if (amps_.size() != space_.total_dim())
    throw InvalidArgument("StateVector: length does not match space " + space_.describe());
  if (normalized_ && std::abs(amps_.norm() - 1.0) > kNormTolerance)
    throw InvariantViolation("StateVector tagged normalized has norm " +
                             std::to_string(amps_.norm()));
}

StateVector StateVector::normalized() const {
  const double n = amps_.norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
  StateVector out(space_, amps_ / n, true);
  out.warnings_ = warnings_;
  return out;
}

StateVector& StateVector::add_warning(TruncationWarning w) {
  warnings_.push_back(std::move(w));
  return *this;
}

DensityMatrix::DensityMatrix(CompositeSpace space, DenseMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim())
    throw InvalidArgument("DensityMatrix: shape does not match space " + space_.describe());
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const Vector& v = psi.amplitudes();
  return DensityMatrix(psi.space(), v * v.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  const double scale = matrix_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double DensityMatrix::min_eigenvalue() const {
  DenseMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical() const {
  return hermiticity_error() <= kHermitianTolerance &&
         std::abs(trace() - cplx(1.0, 0.0)) <= kNormTolerance && min_eigenvalue() >= -1e-8;
}

StateVector fock_state(const CompositeSpace& space, const std::vector<int>& occupations) {
  Vector v = Vector::Zero(space.total_dim());
  v(space.index_for(occupations)) = 1.0;
  return StateVector(space, std::move(v), true);
}

StateVector vacuum(const CompositeSpace& space) {
  return fock_state(space, std::vector<int>(space.num_modes(), 0));
}

Vector coherent_amplitudes(int dim, cplx alpha) {
  Vector c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

StateVector product_state(const CompositeSpace& space, const std::vector<Vector>& factors) {
  if (factors.size() != space.num_modes())
    throw InvalidArgument("product_state: need one factor per mode");
  Vector v = Vector::Ones(1);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].size() != space.dims()[k])
      throw InvalidArgument("product_state: factor for mode '" + space.labels()[k] +
                            "' has wrong length");
    Vector next(v.size() * factors[k].size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      next.segment(i * factors[k].size(), factors[k].size()) = v(i) * factors[k];
    v = std::move(next);
  }
  return StateVector(space, std::move(v)).normalized();
}

StateVector coherent_state(const CompositeSpace& space, std::string_view mode, cplx alpha) {
  const std::size_t target = space.index_of(mode);
  std::vector<Vector> factors;
  for (std::size_t k = 0; k < space.num_modes(); ++k) {
    const int d = space.dims()[k];
    if (k == target) {
      factors.push_back(coherent_amplitudes(d, alpha));
    } else {
      Vector v = Vector::Zero(d);
      v(0) = 1.0;
      factors.push_back(std::move(v));
    }
  }
  StateVector psi = product_state(space, factors);
  const int d = space.dims()[target];
  if (d < recommended_dim(std::abs(alpha)))
    psi.add_warning({std::string(mode), d, recommended_dim(std::abs(alpha))});
  return psi;
}

cplx expectation(const StateVector& psi, const Operator& a) {
  require_same_space(psi.space(), a.space(), "expectation");
  const Vector& v = psi.amplitudes();
  return v.dot(a.matrix() * v);
}

cplx expectation(const DensityMatrix& rho, const Operator& a) {
  require_same_space(rho.space(), a.space(), "expectation");
  // Tr(rho A) = sum_ij rho_ji A_ij
  cplx tr = 0.0;
  const SparseMatrix& m = a.matrix();
  for (Eigen::Index i = 0; i < m.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) tr += rho.matrix()(it.col(), it.row()) * it.value();
  return tr;
}

namespace {

// For each full basis index: (kept index, traced index).
struct TraceSplit {
  CompositeSpace kept;
  Eigen::Index kept_dim = 1;
  Eigen::Index traced_dim = 1;
  std::vector<Eigen::Index> kept_index;
  std::vector<Eigen::Index> traced_index;
};

TraceSplit split_for_trace(const CompositeSpace& space, const std::vector<std::string>& keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: empty keep set");
  CompositeSpace kept = space.subspace(keep);
  std::vector<bool> is_kept(space.num_modes(), false);
  for (const auto& label : keep) is_kept[space.index_of(label)] = true;

  TraceSplit split{kept, kept.total_dim(), space.total_dim() / kept.total_dim(), {}, {}};
  const auto n = static_cast<std::size_t>(space.total_dim());
  split.kept_index.resize(n);
  split.traced_index.resize(n);
  for (Eigen::Index i = 0; i < space.total_dim(); ++i) {
    const auto occ = space.occupations(i);
    Eigen::Index ki = 0, ti = 0;
    for (std::size_t k = 0; k < occ.size(); ++k) {
      if (is_kept[k]) ki = ki * space.dims()[k] + occ[k];
      else ti = ti * space.dims()[k] + occ[k];
    }
    split.kept_index[static_cast<std::size_t>(i)] = ki;
    split.traced_index[static_cast<std::size_t>(i)] = ti;
  }
  return split;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  const TraceSplit s = split_for_trace(rho.space(), keep);
  DenseMatrix out = DenseMatrix::Zero(s.kept_dim, s.kept_dim);
  const Eigen::Index n = rho.dim();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (s.traced_index[static_cast<std::size_t>(i)] == s.traced_index[static_cast<std::size_t>(j)])
        out(s.kept_index[static_cast<std::size_t>(i)], s.kept_index[static_cast<std::size_t>(j)]) +=
            rho.matrix()(i, j);
  return DensityMatrix(s.kept, std::move(out));
}

DensityMatrix partial_trace(const StateVector& psi, const std::vector<std::string>& keep) {
  const TraceSplit s = split_for_trace(psi.space(), keep);
  DenseMatrix v = DenseMatrix::Zero(s.kept_dim, s.traced_dim);
  for (Eigen::Index i = 0; i < psi.dim(); ++i)
    v(s.kept_index[static_cast<std::size_t>(i)], s.traced_index[static_cast<std::size_t>(i)]) =
        psi.amplitudes()(i);
  return DensityMatrix(s.kept, v * v.adjoint());
}

}  // namespace omx
