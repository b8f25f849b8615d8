#include "omx/generator.hpp"

#include <algorithm>
#include <cmath>

#include "omx/errors.hpp"

namespace omx {

namespace {

// Maximum absolute row sum.
double row_sum_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

Generator::Generator(CompositeSpace space)
    : space_(std::move(space)), constant_(space_.total_dim(), space_.total_dim()) {}

Generator::Generator(const Operator& constant)
    : space_(constant.space()), constant_(constant.matrix()) {}

Generator& Generator::add(const Operator& op) {
  require_same_space(space_, op.space(), "Generator::add");
  constant_ += op.matrix();
  constant_.makeCompressed();
  return *this;
}

Generator& Generator::add(const Operator& op, Coefficient coefficient, double bound) {
  require_same_space(space_, op.space(), "Generator::add");
  if (!coefficient) return add(op);
  terms_.push_back({op.matrix(), std::move(coefficient), bound});
  return *this;
}

Operator Generator::at(double t) const {
  SparseMatrix m = constant_;
  for (const auto& term : terms_) m += term.coefficient(t) * term.matrix;
  return Operator(space_, std::move(m));
}

void Generator::apply(double t, const Vector& x, Vector& y) const {
  y.noalias() = constant_ * x;
  for (const auto& term : terms_) {
    const cplx c = term.coefficient(t);
    if (c != 0.0) y.noalias() += c * (term.matrix * x);
  }
}

DenseMatrix Generator::apply(double t, const DenseMatrix& m) const {
  DenseMatrix out = constant_ * m;
  for (const auto& term : terms_) {
    const cplx c = term.coefficient(t);
    if (c != 0.0) out.noalias() += c * (term.matrix * m);
  }
  return out;
}

double Generator::frequency_scale() const {
  double scale = row_sum_norm(constant_);
  for (const auto& term : terms_) scale += term.bound * row_sum_norm(term.matrix);
  return scale;
}

}  // namespace omx
