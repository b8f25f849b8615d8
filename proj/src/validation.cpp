#include <algorithm>
#include <cmath>

#include "omx/analysis.hpp"
#include "omx/dynamics.hpp"

namespace omx {

namespace {

void summarize(const std::vector<double>& f, double& min_f, double& mean_f) {
  min_f = f.empty() ? 1.0 : *std::min_element(f.begin(), f.end());
  double s = 0.0;
  for (double v : f) s += v;
  mean_f = f.empty() ? 1.0 : s / static_cast<double>(f.size());
}

void add_ramped(Generator& g, const Operator& op, const Ramp& ramp) {
  if (ramp.is_constant())
    g.add(ramp(0.0) * op);
  else
    g.add(op, [ramp](double t) { return cplx(ramp(t)); }, ramp.max_abs_value());
}

}  // namespace

SidebandValidationReport validate_effective(const SidebandValidation& v) {
  const DeviceParams& dev = v.device;
  dev.validate();
  if (dev.num_optical() != 1) throw InvalidArgument("validate_effective: requires one optical mode");
  v.drive.validate(1);
  if (!(v.horizon > 0.0)) throw InvalidArgument("validate_effective: horizon must be > 0");
  if (v.sign != 1 && v.sign != -1) throw InvalidArgument("validate_effective: sign must be +1 or -1");
  const double delta = v.drive.channels[0].detuning;
  const double resonant = v.sign * v.order * dev.mechanical_frequency;
  if (std::abs(delta - resonant) > 1e-9 * dev.mechanical_frequency)
    throw InvalidArgument("validate_effective: detuning must equal sign * order * omega_m = " +
                          std::to_string(resonant));

  const CompositeSpace space = optomechanical_space({v.optical_dim}, v.mech_dim);
  const StateVector psi0 = fock_state(space, v.initial_occupations);
  const Operator p = polaron_transform(space, dev);
  const SparseMatrix pdag = p.matrix().adjoint();

  // Free part Delta n_a + w_m n_b, diagonal in the product Fock basis.
  Eigen::VectorXd h0(space.total_dim());
  for (Eigen::Index i = 0; i < space.total_dim(); ++i) {
    const std::vector<int> occ = space.occupations(i);
    h0(i) = delta * occ[0] + dev.mechanical_frequency * occ[1];
  }

  EvolutionSpec full{drive_frame_generator(space, dev, v.drive), v.horizon, v.dt, v.samples};
  EvolutionSpec eff{sideband_generator(space, dev, v.drive.channels[0].strength, v.order, v.sign),
                    v.horizon, v.dt, v.samples};
  const StateVector eff0 = StateVector(space, pdag * psi0.amplitudes()).normalized();

  const Trajectory tf = propagate_schrodinger(full, psi0);
  const Trajectory te = propagate_schrodinger(eff, eff0);

  const Operator na = number_operator(space, optical_mode(0));
  const Operator nb = number_operator(space, kMechMode);
  SidebandValidationReport r;
  r.times = tf.times;
  for (std::size_t k = 0; k < tf.times.size(); ++k) {
    const double t = tf.times[k];
    const Vector phase = (h0 * t).unaryExpr([](double x) { return std::polar(1.0, x); });
    const Vector& full_amp = tf.states[k].amplitudes();
    const Vector& eff_amp = te.states[k].amplitudes();
    const StateVector mapped(space, phase.cwiseProduct(pdag * full_amp));
    r.fidelity.push_back(fidelity(mapped, te.states[k]));

    const StateVector lab(space, p.matrix() * phase.conjugate().cwiseProduct(eff_amp));
    const double lab_norm = lab.amplitudes().squaredNorm();
    r.photons_full.push_back(expectation(tf.states[k], na).real());
    r.phonons_full.push_back(expectation(tf.states[k], nb).real());
    r.photons_effective.push_back(expectation(lab, na).real() / lab_norm);
    r.phonons_effective.push_back(expectation(lab, nb).real() / lab_norm);
    r.max_photon_deviation =
        std::max(r.max_photon_deviation, std::abs(r.photons_full.back() - r.photons_effective.back()));
    r.max_phonon_deviation =
        std::max(r.max_phonon_deviation, std::abs(r.phonons_full.back() - r.phonons_effective.back()));
  }
  summarize(r.fidelity, r.min_fidelity, r.mean_fidelity);
  return r;
}

MeanFieldValidationReport validate_mean_field(const MeanFieldValidation& v) {
  const DeviceParams& dev = v.device;
  dev.validate();
  if (dev.num_optical() != 2) throw InvalidArgument("validate_mean_field: requires two optical modes");
  v.drive.validate(2);
  if (!(v.horizon > 0.0)) throw InvalidArgument("validate_mean_field: horizon must be > 0");

  const CompositeSpace space = optomechanical_space({v.optical_dim, v.optical_dim}, v.mech_dim);
  Vector mech0 = Vector::Zero(v.mech_dim);
  mech0(0) = 1.0;
  const StateVector psi0 = product_state(space, {coherent_amplitudes(v.optical_dim, v.beta1),
                                                 coherent_amplitudes(v.optical_dim, v.beta2), mech0});

  const CompositeSpace mech = CompositeSpace::single(v.mech_dim, kMechMode);
  const Operator b = mode_annihilation(mech, kMechMode);
  const Operator bd = adjoint(b);
  Generator po(mech);
  const double betas[2] = {v.beta1, v.beta2};
  std::vector<Ramp> couplings;
  for (int j = 1; j <= 2; ++j) {
    const Ramp& omega = v.drive.channels[j - 1].strength;
    std::vector<Ramp::Knot> knots;
    for (const auto& [t, w] : omega.knots())
      knots.emplace_back(t, mean_field_coupling(w, dev.alpha(j - 1), betas[j - 1], j, v.convention));
    couplings.emplace_back(knots);
  }
  add_ramped(po, number_operator(mech, kMechMode), v.drive.offset);
  add_ramped(po, bd + b, couplings[0]);
  add_ramped(po, compose(bd, bd) + compose(b, b), couplings[1]);

  EvolutionSpec full{bichromatic_generator(space, dev, v.drive), v.horizon, v.dt, v.samples};
  EvolutionSpec reduced{po, v.horizon, v.dt, v.samples};
  const Trajectory tf = propagate_schrodinger(full, psi0);
  const Trajectory tr = propagate_schrodinger(reduced, vacuum(mech));

  MeanFieldValidationReport r;
  r.g1 = couplings[0](0.0);
  r.g2 = couplings[1](0.0);
  r.times = tf.times;
  for (std::size_t k = 0; k < tf.times.size(); ++k) {
    const DensityMatrix rho = partial_trace(tf.states[k], {kMechMode});
    r.fidelity.push_back(fidelity(rho, tr.states[k]));
  }
  summarize(r.fidelity, r.min_fidelity, r.mean_fidelity);
  return r;
}

}  // namespace omx
