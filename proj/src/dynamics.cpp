#include "omx/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace omx {

namespace {

constexpr double kDivergenceFactor = 1e3;

double row_sum_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

struct StepPlan {
  double dt = 0.0;
  long steps_per_sample = 0;
};

StepPlan plan_steps(const EvolutionSpec& spec) {
  if (!(spec.t_end >= 0.0)) throw InvalidArgument("evolution: time span must be >= 0");
  if (spec.samples < 1) throw InvalidArgument("evolution: samples must be >= 1");
  if (spec.dt < 0.0) throw InvalidArgument("evolution: step size must be > 0");
  for (const auto& c : spec.collapse)
    if (!(c.rate >= 0.0)) throw InvalidArgument("evolution: collapse rates must be >= 0");
  if (spec.t_end == 0.0) return {0.0, 0};
  const double dt_max = spec.dt > 0.0 ? spec.dt : default_time_step(spec.hamiltonian, spec.collapse);
  const double interval = spec.t_end / spec.samples;
  const long per = std::max(1L, static_cast<long>(std::ceil(interval / dt_max - 1e-9)));
  return {interval / static_cast<double>(per), per};
}

}  // namespace

double default_time_step(const Generator& h, const std::vector<CollapseChannel>& collapse) {
  double w = h.frequency_scale();
  for (const auto& c : collapse)
    w += c.rate * row_sum_norm(SparseMatrix(c.op.matrix().adjoint() * c.op.matrix()));
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / (200.0 * w);
}

Trajectory propagate_schrodinger(const EvolutionSpec& spec, const StateVector& initial) {
  if (!spec.collapse.empty())
    throw InvalidArgument("propagate_schrodinger: collapse channels require propagate_lindblad");
  require_same_space(spec.hamiltonian.space(), initial.space(), "propagate_schrodinger");
  const double norm0 = initial.norm();
  if (std::abs(norm0 - 1.0) > kNormTolerance)
    throw InvalidArgument("propagate_schrodinger: initial state is not normalized");
  for (const auto& [name, op] : spec.observables)
    require_same_space(op.space(), initial.space(), "observable " + name);

  const StepPlan plan = plan_steps(spec);
  const Generator& h = spec.hamiltonian;
  const cplx mi(0.0, -1.0);

  Trajectory traj;
  traj.dt = plan.dt;
  Vector psi = initial.amplitudes();

  auto record = [&](double t) {
    const double n = psi.norm();
    if (!std::isfinite(n) || n > kDivergenceFactor * norm0) {
      const double last = traj.times.empty() ? 0.0 : traj.times.back();
      throw DivergenceError("propagate_schrodinger: state diverged before t = " + std::to_string(t),
                            last, traj);
    }
    traj.times.push_back(t);
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(n - norm0));
    StateVector s(initial.space(), psi);
    for (const auto& [name, op] : spec.observables) traj.observables[name].push_back(expectation(s, op));
    if (spec.store_states) traj.states.push_back(std::move(s));
  };

  record(0.0);
  if (plan.steps_per_sample == 0) return traj;

  const Eigen::Index n = psi.size();
  Vector k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double dt = plan.dt;
  for (int s = 0; s < spec.samples; ++s) {
    for (long k = 0; k < plan.steps_per_sample; ++k) {
      const double t = (static_cast<double>(s) * plan.steps_per_sample + k) * dt;
      h.apply(t, psi, k1);
      k1 *= mi;
      tmp = psi + 0.5 * dt * k1;
      h.apply(t + 0.5 * dt, tmp, k2);
      k2 *= mi;
      tmp = psi + 0.5 * dt * k2;
      h.apply(t + 0.5 * dt, tmp, k3);
      k3 *= mi;
      tmp = psi + dt * k3;
      h.apply(t + dt, tmp, k4);
      k4 *= mi;
      psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ++traj.steps;
    }
    record(spec.t_end * (s + 1) / spec.samples);
  }
  return traj;
}

namespace {

struct Dissipator {
  SparseMatrix l;
  SparseMatrix ldag_l;
  double rate;
};

}  // namespace

Trajectory propagate_lindblad(const EvolutionSpec& spec, const DensityMatrix& initial) {
  require_same_space(spec.hamiltonian.space(), initial.space(), "propagate_lindblad");
  for (const auto& c : spec.collapse) require_same_space(c.op.space(), initial.space(), "collapse");
  for (const auto& [name, op] : spec.observables)
    require_same_space(op.space(), initial.space(), "observable " + name);

  const StepPlan plan = plan_steps(spec);
  const Generator& h = spec.hamiltonian;
  const cplx i1(0.0, 1.0);

  std::vector<Dissipator> diss;
  for (const auto& c : spec.collapse) {
    SparseMatrix ldl = SparseMatrix(c.op.matrix().adjoint()) * c.op.matrix();
    diss.push_back({c.op.matrix(), std::move(ldl), c.rate});
  }

  // Uses rho H = (H rho)^dagger and L rho L^dagger = (L (L rho)^dagger)^dagger,
  // valid for Hermitian rho. On an anti-Hermitian component this form is not
  // dissipative, so rho is re-symmetrized after every step.
  auto rhs = [&](double t, const DenseMatrix& rho) {
    DenseMatrix x = h.apply(t, rho);
    DenseMatrix out = -i1 * (x - x.adjoint());
    for (const auto& d : diss) {
      if (d.rate == 0.0) continue;
      const DenseMatrix lr = d.l * rho;
      const DenseMatrix lrl = d.l * lr.adjoint();
      const DenseMatrix y = d.ldag_l * rho;
      out.noalias() += d.rate * (lrl.adjoint() - 0.5 * (y + y.adjoint()));
    }
    return out;
  };

  Trajectory traj;
  traj.dt = plan.dt;
  traj.min_eigenvalue = std::numeric_limits<double>::infinity();
  DenseMatrix rho = initial.matrix();
  const cplx trace0 = rho.trace();

  auto record = [&](double t) {
    const double tr_drift = std::abs(rho.trace() - trace0);
    if (!rho.allFinite() || tr_drift > kDivergenceFactor) {
      const double last = traj.times.empty() ? 0.0 : traj.times.back();
      throw DivergenceError("propagate_lindblad: density matrix diverged before t = " +
                                std::to_string(t),
                            last, traj);
    }
    DensityMatrix d(initial.space(), rho);
    traj.times.push_back(t);
    traj.max_norm_drift = std::max(traj.max_norm_drift, tr_drift);
    traj.max_hermiticity_error = std::max(traj.max_hermiticity_error, d.hermiticity_error());
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, d.min_eigenvalue());
    for (const auto& [name, op] : spec.observables) traj.observables[name].push_back(expectation(d, op));
    if (spec.store_states) traj.densities.push_back(std::move(d));
  };

  record(0.0);
  if (plan.steps_per_sample == 0) return traj;

  const double dt = plan.dt;
  for (int s = 0; s < spec.samples; ++s) {
    for (long k = 0; k < plan.steps_per_sample; ++k) {
      const double t = (static_cast<double>(s) * plan.steps_per_sample + k) * dt;
      const DenseMatrix k1 = rhs(t, rho);
      const DenseMatrix k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1);
      const DenseMatrix k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2);
      const DenseMatrix k4 = rhs(t + dt, rho + dt * k3);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      rho = 0.5 * (rho + rho.adjoint()).eval();
      ++traj.steps;
    }
    record(spec.t_end * (s + 1) / spec.samples);
  }
  return traj;
}

cplx cavity_steady_state(double detuning, double kappa, double omega) {
  if (!(kappa > 0.0)) throw DomainError("cavity_steady_state: kappa must be > 0");
  return cplx(0.0, -0.5 * omega) / cplx(0.5 * kappa, detuning);
}

}  // namespace omx
