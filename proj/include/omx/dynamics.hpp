#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "omx/errors.hpp"
#include "omx/fock_core.hpp"
#include "omx/generator.hpp"
#include "omx/hamiltonians.hpp"

namespace omx {

// Collapse operator L entering rate * (L rho L^dagger - 1/2 {L^dagger L, rho}).
struct CollapseChannel {
  Operator op;
  double rate = 0.0;
};

struct EvolutionSpec {
  EvolutionSpec(Generator h, double t_end_, double dt_ = 0.0, int samples_ = 100)
      : hamiltonian(std::move(h)), t_end(t_end_), dt(dt_), samples(samples_) {}

  Generator hamiltonian;
  double t_end = 0.0;
  // 0 selects default_time_step().
  double dt = 0.0;
  // Number of sample intervals; samples at t = k * t_end / samples.
  int samples = 100;
  std::vector<CollapseChannel> collapse;
  std::vector<std::pair<std::string, Operator>> observables;
  bool store_states = true;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;       // closed evolution
  std::vector<DensityMatrix> densities;  // open evolution
  std::map<std::string, std::vector<cplx>> observables;
  double dt = 0.0;
  long steps = 0;
  // closed: max |norm - initial norm|; open: max |trace - initial trace|
  double max_norm_drift = 0.0;
  double max_hermiticity_error = 0.0;  // open only
  double min_eigenvalue = 0.0;         // open only, over samples
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double last_good_time, Trajectory partial)
      : Error(what), last_good_time_(last_good_time), partial_(std::move(partial)) {}
  double last_good_time() const { return last_good_time_; }
  const Trajectory& partial() const { return partial_; }

 private:
  double last_good_time_;
  Trajectory partial_;
};

// 2 pi / (200 w_max) with w_max the generator's frequency scale (plus the
// collapse rates for open systems).
double default_time_step(const Generator& h, const std::vector<CollapseChannel>& collapse = {});

// Classical fourth-order Runge-Kutta on i d/dt psi = H(t) psi.
Trajectory propagate_schrodinger(const EvolutionSpec& spec, const StateVector& initial);

// Same integrator on the Lindblad master equation.
Trajectory propagate_lindblad(const EvolutionSpec& spec, const DensityMatrix& initial);

// Fixed point of d<a>/dt = -(i Delta + kappa/2) <a> - i Omega/2.
cplx cavity_steady_state(double detuning, double kappa, double omega);

// -- validation experiments ------------------------------------------------

struct SidebandValidationReport {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> photons_full, photons_effective;
  std::vector<double> phonons_full, phonons_effective;
  double min_fidelity = 1.0;
  double mean_fidelity = 1.0;
  double max_photon_deviation = 0.0;
  double max_phonon_deviation = 0.0;
};

struct SidebandValidation {
  DeviceParams device;  // one optical mode
  DriveSchedule drive;  // detuning must equal sign * order * w_m
  int order = 1;
  int sign = +1;
  double horizon = 0.0;
  int optical_dim = 5;
  int mech_dim = 10;
  std::vector<int> initial_occupations{1, 0};
  int samples = 200;
  double dt = 0.0;
};

// Runs the full model in the drive frame and the resonant sideband model from
// the same physical initial state. The full state is mapped into the
// effective frame (polaron transform, then the interaction picture of
// Delta n_a + w_m n_b) before computing fidelities.
SidebandValidationReport validate_effective(const SidebandValidation& v);

struct MeanFieldValidationReport {
  std::vector<double> times;
  std::vector<double> fidelity;
  double min_fidelity = 1.0;
  double mean_fidelity = 1.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

struct MeanFieldValidation {
  DeviceParams device;  // two optical modes
  DriveSchedule drive;  // Omega_1(t), Omega_2(t), offset eps(t)
  double beta1 = 0.0;
  double beta2 = 0.0;
  double horizon = 0.0;
  int optical_dim = 30;
  int mech_dim = 12;
  CouplingConvention convention = CouplingConvention::substitution;
  int samples = 50;
  double dt = 0.0;
};

// Evolves the bichromatic model from coherent optical states and mechanical
// vacuum and compares the reduced mechanical state with the parametric
// oscillator driven by the mean-field couplings.
MeanFieldValidationReport validate_mean_field(const MeanFieldValidation& v);

}  // namespace omx
