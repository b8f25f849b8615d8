#pragma once

#include <functional>
#include <vector>

#include "omx/fock_core.hpp"

namespace omx {

// Time-dependent operator H(t) = sum_k c_k(t) O_k.
//
// Terms without a coefficient function are constant and are merged into a
// single matrix as they are added. `bound` is an upper bound on |c_k(t)| used
// for the frequency scale that sets the default time step.
class Generator {
 public:
  using Coefficient = std::function<cplx(double)>;

  explicit Generator(CompositeSpace space);
  explicit Generator(const Operator& constant);

  const CompositeSpace& space() const { return space_; }

  Generator& add(const Operator& op);
  Generator& add(const Operator& op, Coefficient coefficient, double bound);

  bool time_independent() const { return terms_.empty(); }

  Operator at(double t) const;

  // y = H(t) x
  void apply(double t, const Vector& x, Vector& y) const;
  // H(t) * m
  DenseMatrix apply(double t, const DenseMatrix& m) const;

  // Gershgorin bound on the spectral radius, using the coefficient bounds.
  double frequency_scale() const;

 private:
  struct Term {
    SparseMatrix matrix;
    Coefficient coefficient;
    double bound;
  };

  CompositeSpace space_;
  SparseMatrix constant_;
  std::vector<Term> terms_;
};

}  // namespace omx
