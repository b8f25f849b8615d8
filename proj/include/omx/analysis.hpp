#pragma once

// Ground states, Husimi Q functions, quadrature squeezing and fidelities.

#include <functional>
#include <vector>

#include "omx/fock_core.hpp"
#include "omx/hamiltonians.hpp"

namespace omx {

struct EigenPair {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;  // ||H psi - E psi||
};

// Lowest eigenpair of a Hermitian operator (dense eigendecomposition).
EigenPair lowest_eigenpair(const Operator& h);

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
  int dim = 0;
  // Fidelity between the solution at `dim` and at 2 * dim.
  double convergence_fidelity = 0.0;
  bool converged = false;
};

inline constexpr double kGroundStateConvergence = 1e-6;

using HamiltonianFactory = std::function<Operator(int dim)>;

// Solves at start_dim, 2 start_dim, ... and stops at the first dim whose
// ground state has fidelity > 1 - 1e-6 with the ground state at twice that
// dim. The result at max_dim / 2 is returned unconverged if none pass.
GroundState ground_state(const HamiltonianFactory& factory, int start_dim = 32,
                         int max_dim = 256);

// Single solve on a fixed operator; `converged` is left false.
GroundState ground_state(const Operator& h);

struct SqueezingReport {
  double var_x = 0.0;
  double var_y = 0.0;
  double uncertainty_product = 0.0;
  double squeezing_db = 0.0;  // 10 log10(2 min(var_x, var_y))
  cplx mean_b = 0.0;
};

SqueezingReport quadrature_variances(const StateVector& psi);
SqueezingReport quadrature_variances(const DensityMatrix& rho);

struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  double step() const { return count > 1 ? (max - min) / (count - 1) : 0.0; }
  double at(int i) const { return min + i * step(); }
  // Index of the grid point nearest to v.
  int nearest(double v) const;
};

struct GridSpec {
  AxisSpec re;
  AxisSpec im;
};

inline constexpr int kMinGridPoints = 8;

struct GridMoments {
  double mean_re = 0.0;
  double mean_im = 0.0;
  double var_re = 0.0;
  double var_im = 0.0;
  double cov = 0.0;
};

class QFunctionGrid {
 public:
  QFunctionGrid(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  // Row-major over the imaginary axis: index = i_im * re.count + i_re.
  const std::vector<double>& values() const { return values_; }
  double value(int i_re, int i_im) const;

  // Trapezoidal estimate of the integral of Q over the grid.
  double normalization() const { return normalization_; }
  // (i_re, i_im) of the maximum.
  std::pair<int, int> peak() const;
  GridMoments moments() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
  double normalization_ = 0.0;
};

// Q(beta) = |<beta|psi>|^2 / pi, resp. <beta|rho|beta> / pi, for a
// single-mode state. Throws InvalidArgument for fewer than 8 points per axis.
QFunctionGrid husimi_q(const StateVector& psi, const GridSpec& grid);
QFunctionGrid husimi_q(const DensityMatrix& rho, const GridSpec& grid);

// Square grid centred on the origin covering <b> +- span_sigma * max sqrt(Var).
GridSpec default_grid(const SqueezingReport& report, int points = 201, double span_sigma = 5.0);

double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const DensityMatrix& rho, const StateVector& psi);
double fidelity(const StateVector& psi, const DensityMatrix& rho);
// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct RegimeClassification {
  Regime regime = Regime::harmonic;
  double proximity = 0.0;  // (eps - 2 g2) / eps
};

// Throws DomainError for epsilon = 0.
RegimeClassification classify_regime(const ParametricModel& model);

// Undriven full model, diagonalized per optical-occupation sector (the
// photon numbers are conserved). Sector levels are matched in ascending order
// with n_b = 0, 1, ... and compared with
//   sum_j w_j n_j + w_m n_b - sum_{j,k} (g_0j g_0k / w_m) n_j n_k.
// The top levels of a sector are distorted by the mechanical truncation; a
// level is `trusted` when n_b < dim_b - recommended_dim(sum_j alpha_j n_j).
struct SpectrumLevel {
  std::vector<int> occupations;  // optical..., n_b
  double eigenvalue = 0.0;
  double predicted = 0.0;
  bool trusted = true;
};

struct SpectrumReport {
  std::vector<SpectrumLevel> levels;
  double max_deviation = 0.0;      // over trusted levels
  double max_deviation_all = 0.0;  // over every level
  int trusted_levels = 0;
  double off_sector_norm = 0.0;  // max |H_ik| coupling different sectors
};

SpectrumReport undriven_spectrum(const CompositeSpace& space, const DeviceParams& dev);

}  // namespace omx
