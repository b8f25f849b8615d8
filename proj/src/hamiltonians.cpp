#include "omx/hamiltonians.hpp"

#include <cmath>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "omx/errors.hpp"
#include "omx/special_functions.hpp"

namespace omx {

std::string optical_mode(std::size_t j) { return "opt" + std::to_string(j + 1); }

CompositeSpace optomechanical_space(const std::vector<int>& optical_dims, int mech_dim) {
  std::vector<int> dims = optical_dims;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < optical_dims.size(); ++j) labels.push_back(optical_mode(j));
  dims.push_back(mech_dim);
  labels.emplace_back(kMechMode);
  return CompositeSpace(std::move(dims), std::move(labels));
}

void DeviceParams::validate() const {
  if (!(mechanical_frequency > 0.0)) throw InvalidArgument("device: omega_m must be > 0");
  if (!(loss_rate >= 0.0)) throw InvalidArgument("device: loss rate must be >= 0");
  if (couplings.empty()) throw InvalidArgument("device: at least one optical mode required");
  if (optical_frequencies.size() != couplings.size())
    throw InvalidArgument("device: optical frequency and coupling lists differ in length");
}

void DriveSchedule::validate(std::size_t num_optical) const {
  if (channels.size() != num_optical)
    throw InvalidArgument("drive: expected " + std::to_string(num_optical) +
                          " drive channels, got " + std::to_string(channels.size()));
  for (const auto& c : channels)
    if (c.strength.min_value() < 0.0) throw InvalidArgument("drive: strengths must be >= 0");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::harmonic: return "harmonic";
    case Regime::free_particle: return "free_particle";
    case Regime::inverted: return "inverted";
  }
  return "unknown";
}

Regime regime_of(const ParametricModel& m) {
  const double omega_y = m.epsilon - 2.0 * m.g2;
  if (std::abs(omega_y) <= 1e-12 * std::abs(m.epsilon)) return Regime::free_particle;
  return omega_y > 0.0 ? Regime::harmonic : Regime::inverted;
}

QuadraticForm quadratic_form(const ParametricModel& m) {
  QuadraticForm q;
  q.omega_x = m.epsilon + 2.0 * m.g2;
  q.omega_y = m.epsilon - 2.0 * m.g2;
  if (q.omega_x == 0.0)
    throw DomainError("quadratic_form: epsilon + 2 g2 = 0, displacement undefined");
  q.xi = -m.g1 / q.omega_x;
  q.regime = regime_of(m);
  return q;
}

namespace {

void require_om_space(const CompositeSpace& space, const DeviceParams& dev) {
  dev.validate();
  if (!space.has_mode(kMechMode))
    throw InvalidArgument("space has no mechanical mode '" + std::string(kMechMode) + "'");
  if (space.num_modes() != dev.num_optical() + 1)
    throw InvalidArgument("space " + space.describe() + " does not match " +
                          std::to_string(dev.num_optical()) + " optical + 1 mechanical modes");
  for (std::size_t j = 0; j < dev.num_optical(); ++j) space.index_of(optical_mode(j));
}

Operator tagged(Operator op) {
  op.tag_hermitian();
  return op;
}

// Terms of the lab-frame model common to the Operator and Generator builders.
Operator undriven_lab(const CompositeSpace& space, const DeviceParams& dev,
                      const std::vector<double>& optical) {
  const Operator b = mode_annihilation(space, kMechMode);
  const Operator bx = b + adjoint(b);
  Operator h = dev.mechanical_frequency * number_operator(space, kMechMode);
  for (std::size_t j = 0; j < dev.num_optical(); ++j) {
    const Operator n = number_operator(space, optical_mode(j));
    h += optical[j] * n;
    h -= dev.couplings[j] * compose(n, bx);
  }
  return h;
}

Operator optical_x(const CompositeSpace& space, std::size_t j) {
  const Operator a = mode_annihilation(space, optical_mode(j));
  return a + adjoint(a);
}

}  // namespace

Operator multimode_om_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                                  const DriveSchedule& drive, double t) {
  require_om_space(space, dev);
  drive.validate(dev.num_optical());
  Operator h = undriven_lab(space, dev, dev.optical_frequencies);
  for (std::size_t j = 0; j < dev.num_optical(); ++j) {
    const double wd = dev.optical_frequencies[j] - drive.channels[j].detuning;
    h += drive.channels[j].strength(t) * std::cos(wd * t) * optical_x(space, j);
  }
  return tagged(std::move(h));
}

Generator multimode_om_generator(const CompositeSpace& space, const DeviceParams& dev,
                                 const DriveSchedule& drive) {
  require_om_space(space, dev);
  drive.validate(dev.num_optical());
  Generator g(undriven_lab(space, dev, dev.optical_frequencies));
  for (std::size_t j = 0; j < dev.num_optical(); ++j) {
    const Ramp omega = drive.channels[j].strength;
    const double wd = dev.optical_frequencies[j] - drive.channels[j].detuning;
    g.add(optical_x(space, j), [omega, wd](double t) { return cplx(omega(t) * std::cos(wd * t)); },
          omega.max_abs_value());
  }
  return g;
}

Operator standard_om_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                                 const DriveSchedule& drive, double t) {
  if (dev.num_optical() != 1 || space.num_modes() != 2)
    throw InvalidArgument("standard_om_hamiltonian: requires exactly one optical and one "
                          "mechanical mode");
  return multimode_om_hamiltonian(space, dev, drive, t);
}

namespace {

std::vector<double> detunings(const DriveSchedule& drive) {
  std::vector<double> d;
  for (const auto& c : drive.channels) d.push_back(c.detuning);
  return d;
}

}  // namespace

Operator drive_frame_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                                 const DriveSchedule& drive, double t) {
  require_om_space(space, dev);
  drive.validate(dev.num_optical());
  Operator h = undriven_lab(space, dev, detunings(drive));
  for (std::size_t j = 0; j < dev.num_optical(); ++j)
    h += 0.5 * drive.channels[j].strength(t) * optical_x(space, j);
  return tagged(std::move(h));
}

Generator drive_frame_generator(const CompositeSpace& space, const DeviceParams& dev,
                                const DriveSchedule& drive) {
  require_om_space(space, dev);
  drive.validate(dev.num_optical());
  Generator g(undriven_lab(space, dev, detunings(drive)));
  for (std::size_t j = 0; j < dev.num_optical(); ++j) {
    const Ramp omega = drive.channels[j].strength;
    if (omega.is_constant()) {
      g.add(0.5 * omega(0.0) * optical_x(space, j));
    } else {
      g.add(optical_x(space, j), [omega](double t) { return cplx(0.5 * omega(t)); },
            0.5 * omega.max_abs_value());
    }
  }
  return g;
}

Operator polaron_transform(const CompositeSpace& space, const DeviceParams& dev, int padding) {
  require_om_space(space, dev);
  const std::size_t mech = space.index_of(kMechMode);
  const int dm = space.dims()[mech];
  const int padded = dm + std::max(padding, 0);

  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(padded, padded);
  for (int n = 1; n < padded; ++n) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd antiherm = lower.transpose() - lower;

  std::vector<std::size_t> optical_index;
  for (std::size_t j = 0; j < dev.num_optical(); ++j)
    optical_index.push_back(space.index_of(optical_mode(j)));

  std::map<std::vector<int>, Eigen::MatrixXd> cache;
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (Eigen::Index col = 0; col < space.total_dim(); ++col) {
    std::vector<int> occ = space.occupations(col);
    std::vector<int> key;
    double shift = 0.0;
    for (std::size_t j = 0; j < optical_index.size(); ++j) {
      key.push_back(occ[optical_index[j]]);
      shift += dev.alpha(j) * occ[optical_index[j]];
    }
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, Eigen::MatrixXd((shift * antiherm).exp()).topLeftCorner(dm, dm))
               .first;
    const int nb = occ[mech];
    for (int row_n = 0; row_n < dm; ++row_n) {
      const double v = it->second(row_n, nb);
      if (v == 0.0) continue;
      occ[mech] = row_n;
      triplets.emplace_back(space.index_for(occ), col, v);
    }
  }
  SparseMatrix m(space.total_dim(), space.total_dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(space, std::move(m));
}

Operator kerr_term(const CompositeSpace& space, const DeviceParams& dev) {
  require_om_space(space, dev);
  Operator h = zero_operator(space);
  for (std::size_t j = 0; j < dev.num_optical(); ++j) {
    const Operator nj = number_operator(space, optical_mode(j));
    for (std::size_t k = 0; k < dev.num_optical(); ++k)
      h -= dev.kerr(j, k) * compose(nj, number_operator(space, optical_mode(k)));
  }
  return tagged(std::move(h));
}

SidebandTerm sideband_term(const CompositeSpace& space, const DeviceParams& dev, std::size_t mode,
                           int order, int side) {
  require_om_space(space, dev);
  if (order < 0) throw InvalidArgument("sideband_term: negative order");
  if (side != 1 && side != -1) throw InvalidArgument("sideband_term: side must be +1 or -1");
  if (order == 0 && side == -1)
    throw InvalidArgument("sideband_term: order 0 exists only as a raising term");
  const double alpha = dev.alpha(mode);
  const Operator adag = mode_creation(space, optical_mode(mode));
  const Operator f = fock_diagonal_1f1(space, kMechMode, order, alpha);
  const Operator b = mode_annihilation(space, kMechMode);
  Operator mech = side > 0 ? compose(power(-alpha * adjoint(b), order), f)
                           : compose(f, power(alpha * b, order));
  const double prefactor = std::exp(-0.5 * alpha * alpha) / (2.0 * factorial(order));
  return {mode, order, side, side * order * dev.mechanical_frequency,
          prefactor * compose(adag, mech)};
}

std::vector<SidebandTerm> sideband_terms(const CompositeSpace& space, const DeviceParams& dev,
                                         int p_max) {
  if (p_max < 0) throw InvalidArgument("effective Hamiltonian: p_max must be >= 0");
  std::vector<SidebandTerm> terms;
  for (std::size_t j = 0; j < dev.num_optical(); ++j) {
    for (int p = 0; p <= p_max; ++p) terms.push_back(sideband_term(space, dev, j, p, +1));
    for (int p = 1; p <= p_max; ++p) terms.push_back(sideband_term(space, dev, j, p, -1));
  }
  return terms;
}

Operator effective_hamiltonian(const CompositeSpace& space, const DeviceParams& dev,
                               const DriveSchedule& drive, double t, int p_max) {
  drive.validate(dev.num_optical());
  Operator h = kerr_term(space, dev);
  for (const auto& term : sideband_terms(space, dev, p_max)) {
    const double omega = drive.channels[term.mode].strength(t);
    const double nu = drive.channels[term.mode].detuning + term.frequency_offset;
    const cplx phase = std::polar(1.0, nu * t);
    h += omega * phase * term.op;
    h += omega * std::conj(phase) * adjoint(term.op);
  }
  return tagged(std::move(h));
}

Generator effective_generator(const CompositeSpace& space, const DeviceParams& dev,
                              const DriveSchedule& drive, int p_max) {
  drive.validate(dev.num_optical());
  Generator g(kerr_term(space, dev));
  for (const auto& term : sideband_terms(space, dev, p_max)) {
    const Ramp omega = drive.channels[term.mode].strength;
    const double nu = drive.channels[term.mode].detuning + term.frequency_offset;
    const double bound = omega.max_abs_value();
    g.add(term.op, [omega, nu](double t) { return omega(t) * std::polar(1.0, nu * t); }, bound);
    g.add(adjoint(term.op), [omega, nu](double t) { return omega(t) * std::polar(1.0, -nu * t); },
          bound);
  }
  return g;
}

namespace {

SidebandTerm resonant_term(const CompositeSpace& space, const DeviceParams& dev, int order,
                           int sign) {
  if (dev.num_optical() != 1)
    throw InvalidArgument("sideband_hamiltonian: requires a single optical mode");
  if (sign == 1) {
    if (order < 0) throw InvalidArgument("sideband_hamiltonian: order must be >= 0 for sign +1");
    return sideband_term(space, dev, 0, order, order == 0 ? +1 : -1);
  }
  if (sign == -1) {
    if (order < 1) throw InvalidArgument("sideband_hamiltonian: order must be >= 1 for sign -1");
    return sideband_term(space, dev, 0, order, +1);
  }
  throw InvalidArgument("sideband_hamiltonian: sign must be +1 or -1");
}

}  // namespace

Operator sideband_hamiltonian(const CompositeSpace& space, const DeviceParams& dev, double omega,
                              int order, int sign) {
  const SidebandTerm term = resonant_term(space, dev, order, sign);
  Operator h = kerr_term(space, dev) + omega * (term.op + adjoint(term.op));
  return tagged(std::move(h));
}

Generator sideband_generator(const CompositeSpace& space, const DeviceParams& dev,
                             const Ramp& omega, int order, int sign) {
  const SidebandTerm term = resonant_term(space, dev, order, sign);
  Generator g(kerr_term(space, dev));
  const Operator coupling = term.op + adjoint(term.op);
  if (omega.is_constant())
    g.add(omega(0.0) * coupling);
  else
    g.add(coupling, [omega](double t) { return cplx(omega(t)); }, omega.max_abs_value());
  return g;
}

namespace {

void require_bichromatic(const DeviceParams& dev) {
  if (dev.num_optical() != 2)
    throw InvalidArgument("bichromatic scheme: requires exactly two optical modes");
}

Operator bichromatic_coupling(const CompositeSpace& space, const DeviceParams& dev,
                              std::size_t j) {
  const SidebandTerm term = sideband_term(space, dev, j, static_cast<int>(j) + 1, -1);
  return term.op + adjoint(term.op);
}

}  // namespace

Operator bichromatic_effective(const CompositeSpace& space, const DeviceParams& dev, double omega1,
                               double omega2, double epsilon) {
  require_bichromatic(dev);
  Operator h = kerr_term(space, dev) + epsilon * number_operator(space, kMechMode);
  h += omega1 * bichromatic_coupling(space, dev, 0);
  h += omega2 * bichromatic_coupling(space, dev, 1);
  return tagged(std::move(h));
}

Generator bichromatic_generator(const CompositeSpace& space, const DeviceParams& dev,
                                const DriveSchedule& drive) {
  require_bichromatic(dev);
  drive.validate(2);
  Generator g(kerr_term(space, dev));
  const Operator nb = number_operator(space, kMechMode);
  const Ramp eps = drive.offset;
  if (eps.is_constant())
    g.add(eps(0.0) * nb);
  else
    g.add(nb, [eps](double t) { return cplx(eps(t)); }, eps.max_abs_value());
  for (std::size_t j = 0; j < 2; ++j) {
    const Ramp omega = drive.channels[j].strength;
    const Operator c = bichromatic_coupling(space, dev, j);
    if (omega.is_constant())
      g.add(omega(0.0) * c);
    else
      g.add(c, [omega](double t) { return cplx(omega(t)); }, omega.max_abs_value());
  }
  return g;
}

double mean_field_coupling(double omega, double alpha, double beta, int j,
                           CouplingConvention convention) {
  if (j != 1 && j != 2) throw InvalidArgument("mean_field_coupling: j must be 1 or 2");
  const double envelope = omega / factorial(j) * std::exp(-0.5 * alpha * alpha) * beta;
  switch (convention) {
    case CouplingConvention::substitution: return 0.5 * envelope * std::pow(alpha, j);
    case CouplingConvention::first_power_alpha: return envelope * alpha;
  }
  throw InvalidArgument("mean_field_coupling: unknown convention");
}

double drive_for_coupling(double g, double alpha, double beta, int j,
                          CouplingConvention convention) {
  const double unit = mean_field_coupling(1.0, alpha, beta, j, convention);
  if (unit == 0.0) throw DomainError("drive_for_coupling: coupling does not depend on the drive");
  return g / unit;
}

Operator parametric_oscillator(const ParametricModel& model, const CompositeSpace& space) {
  if (space.num_modes() != 1)
    throw InvalidArgument("parametric_oscillator: requires a single-mode space");
  const std::string& mode = space.labels().front();
  const Operator b = mode_annihilation(space, mode);
  const Operator bd = adjoint(b);
  Operator h = model.epsilon * number_operator(space, mode) + model.g1 * (bd + b) +
               model.g2 * (compose(bd, bd) + compose(b, b));
  return tagged(std::move(h));
}

}  // namespace omx
