#pragma once

// Confluent hypergeometric factors 1F1(-n; p+1; x) for non-negative integer n.
// These are polynomials of degree n in x, related to the generalized Laguerre
// polynomials by
//     1F1(-n; p+1; x) = n! p! / (n+p)! * L_n^(p)(x).

#include <string_view>
#include <vector>

#include "omx/fock_core.hpp"

namespace omx {

// L_n^(p)(x) via the three-term recurrence
//   (k+1) L_{k+1} = (2k+1+p-x) L_k - (k+p) L_{k-1}.
double assoc_laguerre(int n, int p, double x);

// 1F1(-n; m; x) with n >= 0, m >= 1, x >= 0. Throws DomainError otherwise.
double hyp1f1_neg_int(int n, int m, double x);

// p! as a double; exact for p <= 22. Throws OverflowError for p > 170.
double factorial(int p);

// Diagonal of 1F1(-b^dagger b; p+1; alpha^2) on a mode truncated to `dim`.
struct FockDiagonalFactor {
  int dim = 0;
  int order = 0;
  double alpha = 0.0;
  std::vector<double> values;
};

FockDiagonalFactor make_fock_diagonal_factor(int dim, int order, double alpha);

Operator fock_diagonal_1f1(const CompositeSpace& space, std::string_view mode, int order,
                           double alpha);

}  // namespace omx
