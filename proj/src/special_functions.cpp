#include "omx/special_functions.hpp"

#include <cmath>
#include <string>

#include "omx/errors.hpp"

namespace omx {

double assoc_laguerre(int n, int p, double x) {
  if (n < 0) throw DomainError("assoc_laguerre: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = 1.0 + p - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + p - x) * curr - (k + p) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

double hyp1f1_neg_int(int n, int m, double x) {
  if (n < 0) throw DomainError("hyp1f1_neg_int: n must be >= 0, got " + std::to_string(n));
  if (m < 1) throw DomainError("hyp1f1_neg_int: m must be >= 1, got " + std::to_string(m));
  if (!(x >= 0.0)) throw DomainError("hyp1f1_neg_int: x must be >= 0");
  if (n == 0) return 1.0;
  const int p = m - 1;
  // binomial(n+p, n) accumulated as a product to avoid factorial overflow
  double binom = 1.0;
  for (int k = 1; k <= n; ++k) binom *= static_cast<double>(k + p) / k;
  return assoc_laguerre(n, p, x) / binom;
}

double factorial(int p) {
  if (p < 0) throw DomainError("factorial: negative argument");
  if (p > 170) throw OverflowError("factorial: " + std::to_string(p) + "! overflows a double");
  double f = 1.0;
  for (int k = 2; k <= p; ++k) f *= k;
  return f;
}

FockDiagonalFactor make_fock_diagonal_factor(int dim, int order, double alpha) {
  if (order < 0) throw DomainError("fock_diagonal_1f1: sideband order must be >= 0");
  FockDiagonalFactor f{dim, order, alpha, {}};
  f.values.reserve(static_cast<std::size_t>(dim));
  const double x = alpha * alpha;
  for (int n = 0; n < dim; ++n) f.values.push_back(hyp1f1_neg_int(n, order + 1, x));
  return f;
}

Operator fock_diagonal_1f1(const CompositeSpace& space, std::string_view mode, int order,
                           double alpha) {
  const auto factor = make_fock_diagonal_factor(space.dim_of(mode), order, alpha);
  return diagonal_operator(space, mode, factor.values);
}

}  // namespace omx
