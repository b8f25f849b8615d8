#pragma once

// Hamiltonians of driven (multimode) optomechanics and its effective
// reductions, with hbar = 1 and all entries in angular-frequency units.
//
// Spaces used here label the optical modes "opt1", "opt2", ... and the
// single mechanical mode "mech".

#include <string>
#include <vector>

#include "omx/fock_core.hpp"
#include "omx/generator.hpp"
#include "omx/schedule.hpp"

namespace omx {

inline constexpr const char* kMechMode = "mech";
std::string optical_mode(std::size_t j);  // 0 -> "opt1"

CompositeSpace optomechanical_space(const std::vector<int>& optical_dims, int mech_dim);

struct DeviceParams {
  std::vector<double> optical_frequencies;  // omega_j
  double mechanical_frequency = 1.0;        // omega_m
  std::vector<double> couplings;            // g_0j
  double loss_rate = 0.0;                   // kappa

  std::size_t num_optical() const { return couplings.size(); }
  // alpha_j = g_0j / omega_m, always derived.
  double alpha(std::size_t j) const { return couplings.at(j) / mechanical_frequency; }
  double kerr(std::size_t j, std::size_t k) const {
    return couplings.at(j) * couplings.at(k) / mechanical_frequency;
  }
  // omega_m > 0, kappa >= 0, matching list lengths.
  void validate() const;
};

struct DriveChannel {
  Ramp strength;          // Omega_j(t) >= 0
  double detuning = 0.0;  // Delta_j = omega_j - omega_dj
};

struct DriveSchedule {
  std::vector<DriveChannel> channels;
  Ramp offset;  // epsilon(t)

  void validate(std::size_t num_optical) const;
};

enum class Regime { harmonic, free_particle, inverted };
const char* to_string(Regime r);

struct QuadraticForm {
  double omega_x = 0.0;  // epsilon + 2 g2
  double omega_y = 0.0;  // epsilon - 2 g2
  double xi = 0.0;       // -g1 / (epsilon + 2 g2)
  Regime regime = Regime::harmonic;
};

// epsilon b^dagger b + g1 (b^dagger + b) + g2 (b^dagger^2 + b^2)
struct ParametricModel {
  double epsilon = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

Regime regime_of(const ParametricModel& m);
// Throws DomainError when epsilon + 2 g2 = 0 (displacement undefined).
QuadraticForm quadratic_form(const ParametricModel& m);

// -- full models -------------------------------------------------------------

// w a^dagger a + w_m b^dagger b - g0 a^dagger a (b^dagger + b)
//   + Omega(t) cos(w_d t) (a^dagger + a), single optical mode.
Operator standard_om_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                                 const DriveSchedule& drive, double t);

Operator multimode_om_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                                  const DriveSchedule& drive, double t);
Generator multimode_om_generator(const CompositeSpace& space, const DeviceParams& dev,
                                 const DriveSchedule& drive);

// The full model in the frame rotating at each drive frequency, with the
// counter-rotating drive terms at 2 w_dj dropped:
//   sum_j Delta_j n_j + w_m n_b - sum_j g_0j n_j (b + b^dagger)
//     + sum_j Omega_j(t)/2 (a_j + a_j^dagger)
Operator drive_frame_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                                 const DriveSchedule& drive, double t);
Generator drive_frame_generator(const CompositeSpace& space, const DeviceParams& dev,
                                const DriveSchedule& drive);

// Polaron frame P = exp(sum_j alpha_j n_j (b^dagger - b)), which removes the
// linear optomechanical coupling. Mechanical displacements are computed on a
// padded mode and cropped so that low-lying matrix elements are exact.
Operator polaron_transform(const CompositeSpace& space, const DeviceParams& dev,
                           int padding = 32);

// -- effective models ----------------------------------------------------------

// -sum_{j,k} (g_0j g_0k / w_m) n_j n_k
Operator kerr_term(const CompositeSpace& space, const DeviceParams& dev);

// One sideband contribution Omega_j(t) [op e^{i nu t} + h.c.] of the effective
// Hamiltonian, with nu = Delta_j + side * order * w_m and
//   raising (side +1):  op = e^{-alpha^2/2}/(2 p!) a_j^dagger (-alpha b^dagger)^p F_p
//   lowering (side -1): op = e^{-alpha^2/2}/(2 p!) a_j^dagger F_p (alpha b)^p
// where F_p = 1F1(-b^dagger b; p+1; alpha^2).
struct SidebandTerm {
  std::size_t mode = 0;
  int order = 0;
  int side = +1;
  double frequency_offset = 0.0;  // side * order * w_m
  Operator op;
};

SidebandTerm sideband_term(const CompositeSpace& space, const DeviceParams& dev, std::size_t mode,
                           int order, int side);
// All terms for p = 0..p_max (raising) and p = 1..p_max (lowering) per mode.
std::vector<SidebandTerm> sideband_terms(const CompositeSpace& space, const DeviceParams& dev,
                                         int p_max);

inline constexpr int kDefaultSidebandOrder = 4;

Operator effective_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                               const DriveSchedule& drive, double t,
                               int p_max = kDefaultSidebandOrder);
Generator effective_generator(const CompositeSpace& space, const DeviceParams& dev,
                              const DriveSchedule& drive, int p_max = kDefaultSidebandOrder);

// Resonant sideband Hamiltonian of order p for a single optical mode:
// sign +1 keeps the lowering term (Delta = p w_m), sign -1 the raising term
// (Delta = -p w_m), plus the Kerr term.
Operator sideband_hamiltonian(const CompositeSpace& space, const DeviceParams& dev, double omega,
                              int order, int sign);
Generator sideband_generator(const CompositeSpace& space, const DeviceParams& dev,
                             const Ramp& omega, int order, int sign);

// Two optical modes driven near the first and second sideband:
//   Kerr + eps b^dagger b
//     + 1/2 sum_{j=1,2} Omega_j/j! e^{-alpha_j^2/2} [a_j^dagger F_j (alpha_j b)^j + h.c.]
Operator bichromatic_effective(const CompositeSpace& space, const DeviceParams& dev, double omega1,
                               double omega2, double epsilon);
Generator bichromatic_generator(const CompositeSpace& space, const DeviceParams& dev,
                                const DriveSchedule& drive);

// How the mean-field couplings g_j are obtained from the drive.
enum class CouplingConvention {
  // a_j -> beta_j in the bichromatic Hamiltonian with F_j ~ 1:
  //   g_j = Omega_j / (2 j!) e^{-alpha^2/2} alpha^j beta_j
  substitution,
  // g_j = Omega_j / j! e^{-alpha^2/2} alpha beta_j
  first_power_alpha,
};

double mean_field_coupling(double omega, double alpha, double beta, int j,
                           CouplingConvention convention = CouplingConvention::substitution);
// Drive strength that yields coupling g under the given convention.
double drive_for_coupling(double g, double alpha, double beta, int j,
                          CouplingConvention convention = CouplingConvention::substitution);

// Parametric oscillator on a single-mode space.
Operator parametric_oscillator(const ParametricModel& model, const CompositeSpace& space);

}  // namespace omx
