#include <doctest.h>

#include <cmath>
#include <numbers>

#include "omx/analysis.hpp"
#include "omx/dynamics.hpp"
#include "omx/errors.hpp"
#include "omx/schedule.hpp"
#include "support.hpp"

using namespace omx;
using std::numbers::pi;

namespace {

// Closed-system fidelity defect of the beam-splitter transfer at t = pi/(2g).
double beam_splitter_defect(double dt) {
  const CompositeSpace s({2, 2}, {"a", "b"});
  const double g = 1.0;
  const Operator a = mode_annihilation(s, "a");
  const Operator b = mode_annihilation(s, "b");
  const Operator x = compose(adjoint(a), b);
  EvolutionSpec spec(Generator(g * (x + adjoint(x))), pi / (2 * g), dt, 1);
  const Trajectory tr = propagate_schrodinger(spec, fock_state(s, {1, 0}));
  return 1.0 - fidelity(tr.states.back(), fock_state(s, {0, 1}));
}

Operator lossy_cavity(const CompositeSpace& s, double delta, double omega) {
  const Operator a = mode_annihilation(s, "opt1");
  return delta * number_operator(s, "opt1") + (0.5 * omega) * (a + adjoint(a));
}

}  // namespace

TEST_CASE("free rotation of a coherent state") {
  const CompositeSpace s = CompositeSpace::single(40);
  const cplx beta(0.8, -0.3);
  const double wm = 1.0;
  EvolutionSpec spec(Generator(wm * number_operator(s, "mech")), 10.0, 0.0, 20);
  spec.observables = {{"b", mode_annihilation(s, "mech")}};
  const Trajectory tr = propagate_schrodinger(spec, coherent_state(s, "mech", beta));
  REQUIRE(tr.times.size() == 21);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const cplx expected = beta * std::polar(1.0, -wm * tr.times[k]);
    CHECK(std::abs(tr.observables.at("b")[k] - expected) < 1e-6);
  }
  CHECK(tr.max_norm_drift < 1e-8 * 10.0);
}

TEST_CASE("zero Hamiltonian leaves the state unchanged") {
  const CompositeSpace s({2, 3}, {"opt1", "mech"});
  test::Rng rng(13);
  const StateVector psi = rng.state(s);
  EvolutionSpec spec(Generator(zero_operator(s)), 5.0, 0.1, 5);
  const Trajectory tr = propagate_schrodinger(spec, psi);
  for (const auto& st : tr.states) CHECK((st.amplitudes() - psi.amplitudes()).norm() == 0.0);
}

TEST_CASE("beam splitter transfers a single excitation") {
  CHECK(beam_splitter_defect(0.01) < 1e-6);
}

TEST_CASE("Runge-Kutta agrees with the matrix exponential") {
  test::Rng rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const CompositeSpace s({3, 4}, {"opt1", "mech"});
    const Operator h = rng.hermitian(s);
    const StateVector psi = rng.state(s);
    const double t = rng.uniform(0.5, 3.0);
    EvolutionSpec spec(Generator(h), t, 0.0, 1);
    const Trajectory tr = propagate_schrodinger(spec, psi);
    const Vector exact = expm(cplx(0, -t) * h).dense() * psi.amplitudes();
    CHECK(fidelity(tr.states.back(), StateVector(s, exact)) > 1.0 - 1e-6);
    CHECK(tr.max_norm_drift < 1e-8 * t);
  }
}

TEST_CASE("energy is conserved for a time-independent Hamiltonian") {
  const CompositeSpace s = optomechanical_space({4}, 12);
  DeviceParams dev;
  dev.optical_frequencies = {0.3};
  dev.couplings = {0.1};
  DriveSchedule drive;
  drive.channels = {{Ramp(0.2), 0.3}};
  const Operator h = drive_frame_hamiltonian(s, dev, drive, 0.0);
  EvolutionSpec spec(Generator(h), 30.0, 0.0, 30);
  spec.observables = {{"H", h}};
  const Trajectory tr = propagate_schrodinger(spec, fock_state(s, {1, 2}));
  const auto& e = tr.observables.at("H");
  double drift = 0.0;
  for (const auto& v : e) drift = std::max(drift, std::abs(v.real() - e.front().real()));
  CHECK(drift / std::abs(e.front().real()) < 1e-8);
}

TEST_CASE("fourth-order convergence on the beam splitter") {
  const double coarse = beam_splitter_defect(0.2);
  const double fine = beam_splitter_defect(0.1);
  CHECK(coarse / fine >= 8.0);
}

TEST_CASE("time-dependent generator agrees with a fine reference step") {
  const CompositeSpace s = optomechanical_space({3}, 5);
  DeviceParams dev;
  dev.optical_frequencies = {0.0};
  dev.couplings = {0.1};
  DriveSchedule drive;
  drive.channels = {{make_ramp({{0.0, 0.0}, {4.0, 0.5}, {8.0, 0.1}}), 1.0}};
  const Generator g = drive_frame_generator(s, dev, drive);
  const StateVector psi0 = fock_state(s, {0, 1});
  const Trajectory a = propagate_schrodinger(EvolutionSpec(g, 8.0, 0.05, 4), psi0);
  const Trajectory b = propagate_schrodinger(EvolutionSpec(g, 8.0, 0.005, 4), psi0);
  CHECK(fidelity(a.states.back(), b.states.back()) > 1.0 - 1e-8);
}

TEST_CASE("lossless Lindblad matches Schrodinger") {
  const CompositeSpace s({3, 4}, {"opt1", "mech"});
  test::Rng rng(37);
  const Operator h = rng.hermitian(s);
  const StateVector psi = rng.state(s);
  EvolutionSpec spec(Generator(h), 2.0, 0.0, 4);
  spec.collapse = {{mode_annihilation(s, "opt1"), 0.0}};
  const Trajectory open = propagate_lindblad(spec, DensityMatrix::from_pure(psi));
  EvolutionSpec closed(Generator(h), 2.0, 0.0, 4);
  const Trajectory ref = propagate_schrodinger(closed, psi);
  CHECK(fidelity(open.densities.back(), ref.states.back()) > 1.0 - 1e-8);
}

TEST_CASE("undriven cavity decay") {
  const CompositeSpace s({6, 2}, {"opt1", "mech"});
  const double kappa = 0.3;
  EvolutionSpec spec(Generator(zero_operator(s)), 10.0, 0.0, 20);
  spec.collapse = {{mode_annihilation(s, "opt1"), kappa}};
  spec.observables = {{"n", number_operator(s, "opt1")}};
  const Trajectory tr = propagate_lindblad(spec, DensityMatrix::from_pure(fock_state(s, {4, 0})));
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    CHECK(std::abs(tr.observables.at("n")[k].real() - 4.0 * std::exp(-kappa * tr.times[k])) < 1e-6);
  CHECK(tr.max_norm_drift < 1e-8);
  CHECK(tr.max_hermiticity_error < 1e-10);
  CHECK(tr.min_eigenvalue >= -1e-8);
}

TEST_CASE("driven lossy cavity relaxes to the coherent steady state") {
  const double delta = 0.5, kappa = 1.0, omega = 2.0;
  const CompositeSpace s({16, 2}, {"opt1", "mech"});
  EvolutionSpec spec(Generator(lossy_cavity(s, delta, omega)), 30.0, 0.0, 6);
  spec.collapse = {{mode_annihilation(s, "opt1"), kappa}};
  spec.observables = {{"a", mode_annihilation(s, "opt1")}};
  const Trajectory tr = propagate_lindblad(spec, DensityMatrix::from_pure(vacuum(s)));
  const cplx beta = cavity_steady_state(delta, kappa, omega);
  CHECK(std::abs(beta - cplx(-1.0, -1.0)) < 1e-15);
  CHECK(std::abs(tr.observables.at("a").back() - beta) < 1e-4);
  CHECK(tr.max_norm_drift < 1e-8);
  CHECK(tr.max_hermiticity_error < 1e-10);
  CHECK(tr.min_eigenvalue >= -1e-8);
}

TEST_CASE("Lindblad steady state does not depend on the initial state") {
  const double kappa = 1.0;
  const CompositeSpace s({12, 2}, {"opt1", "mech"});
  EvolutionSpec spec(Generator(lossy_cavity(s, 0.3, 1.0)), 20.0 / kappa, 0.0, 2);
  spec.collapse = {{mode_annihilation(s, "opt1"), kappa}};
  const Trajectory from_vacuum = propagate_lindblad(spec, DensityMatrix::from_pure(vacuum(s)));
  const Trajectory from_fock =
      propagate_lindblad(spec, DensityMatrix::from_pure(fock_state(s, {3, 0})));
  CHECK(fidelity(from_vacuum.densities.back(), from_fock.densities.back()) > 1.0 - 1e-4);
}

TEST_CASE("cavity steady state") {
  CHECK(cavity_steady_state(0.7, 1.0, 0.0) == cplx(0.0));
  const double kappa = 1.34;
  const double omega = kappa * std::sqrt(120.0);
  CHECK(omega == doctest::Approx(14.679).epsilon(1e-4));
  CHECK(std::norm(cavity_steady_state(0.0, kappa, omega)) == doctest::Approx(120.0).epsilon(1e-12));
  test::Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const double d = rng.uniform(-3, 3), k = rng.uniform(0.1, 3), o = rng.uniform(0, 5);
    const cplx b = cavity_steady_state(d, k, o);
    CHECK(std::norm(b) == doctest::Approx(o * o / 4.0 / (d * d + k * k / 4.0)).epsilon(1e-12));
    // fixed point of d<a>/dt
    CHECK(std::abs(-(cplx(0, d) + k / 2.0) * b - cplx(0, o / 2.0)) < 1e-12);
  }
  CHECK_THROWS_AS(cavity_steady_state(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(cavity_steady_state(0.0, -1.0, 1.0), DomainError);
}

TEST_CASE("divergence is reported with the last good time") {
  const CompositeSpace s = CompositeSpace::single(4);
  EvolutionSpec spec(Generator(100.0 * number_operator(s, "mech")), 100.0, 1.0, 100);
  try {
    propagate_schrodinger(spec, fock_state(s, {3}));
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.last_good_time() >= 0.0);
    CHECK(e.last_good_time() < 100.0);
    CHECK(!e.partial().times.empty());
    CHECK(e.partial().times.back() == e.last_good_time());
  }
}

TEST_CASE("evolution argument checks") {
  const CompositeSpace s = CompositeSpace::single(3);
  const StateVector v = vacuum(s);
  CHECK_THROWS_AS(propagate_schrodinger(EvolutionSpec(Generator(identity(s)), -1.0), v),
                  InvalidArgument);
  CHECK_THROWS_AS(propagate_schrodinger(EvolutionSpec(Generator(identity(s)), 1.0, -0.1), v),
                  InvalidArgument);
  CHECK_THROWS_AS(propagate_schrodinger(EvolutionSpec(Generator(identity(s)), 1.0, 0.0, 0), v),
                  InvalidArgument);
  Vector bad = Vector::Zero(3);
  bad(0) = 2.0;
  CHECK_THROWS_AS(propagate_schrodinger(EvolutionSpec(Generator(identity(s)), 1.0), StateVector(s, bad)),
                  InvalidArgument);
  EvolutionSpec lossy(Generator(identity(s)), 1.0);
  lossy.collapse = {{mode_annihilation(s, "mech"), -1.0}};
  CHECK_THROWS_AS(propagate_lindblad(lossy, DensityMatrix::from_pure(v)), InvalidArgument);
  CHECK_THROWS_AS(propagate_schrodinger(EvolutionSpec(Generator(identity(CompositeSpace::single(4))), 1.0), v),
                  SpaceMismatch);

  const Trajectory zero = propagate_schrodinger(EvolutionSpec(Generator(identity(s)), 0.0), v);
  CHECK(zero.times.size() == 1);
  CHECK(zero.steps == 0);
}

TEST_CASE("default time step") {
  const CompositeSpace s = CompositeSpace::single(5);
  const Generator g(2.0 * number_operator(s, "mech"));
  CHECK(g.frequency_scale() == doctest::Approx(8.0));
  CHECK(default_time_step(g) == doctest::Approx(2 * pi / (200 * 8.0)));
  Generator td(s);
  td.add(mode_annihilation(s, "mech") + mode_creation(s, "mech"), [](double t) { return cplx(std::sin(t)); },
         1.0);
  CHECK(td.frequency_scale() > 0.0);
  CHECK(std::isinf(default_time_step(Generator(zero_operator(s)))));
}

TEST_CASE("ramps") {
  const Ramp single = make_ramp({{3.0, 0.7}});
  CHECK(single.is_constant());
  CHECK(single(-5.0) == 0.7);
  CHECK(single(50.0) == 0.7);

  const Ramp two = make_ramp({{0.0, 0.0}, {10.0, 1.0}});
  CHECK(two(5.0) == doctest::Approx(0.5));
  CHECK(two(-1.0) == 0.0);
  CHECK(two(11.0) == 1.0);

  const Ramp slow = make_ramp({{0.0, 0.0}, {100.0, 0.1}});
  const AdiabaticityReport r = slow.adiabaticity(1.0);
  CHECK(r.diagnostic == doctest::Approx(1e-3 / 0.1));
  CHECK(r.adiabatic);
  CHECK_FALSE(make_ramp({{0.0, 0.0}, {1.0, 1.0}}).adiabaticity(1.0).adiabatic);

  CHECK_THROWS_AS(make_ramp({}), InvalidArgument);
  CHECK_THROWS_AS(make_ramp({{1.0, 0.0}, {0.5, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(make_ramp({{1.0, 0.0}, {1.0, 1.0}}), InvalidArgument);

  test::Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Ramp::Knot> knots;
    double t = rng.uniform(-5, 5);
    const int n = rng.integer(2, 6);
    for (int k = 0; k < n; ++k) {
      knots.emplace_back(t, rng.uniform(-1, 1));
      t += rng.uniform(0.1, 3);
    }
    const Ramp ramp = make_ramp(knots);
    for (std::size_t k = 0; k < knots.size(); ++k) CHECK(ramp(knots[k].first) == knots[k].second);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double mid = 0.5 * (knots[k].first + knots[k + 1].first);
      CHECK(ramp(mid) == doctest::Approx(0.5 * (knots[k].second + knots[k + 1].second)));
    }
  }
}

TEST_CASE("sideband validation control without coupling or drive") {
  SidebandValidation v;
  v.device.optical_frequencies = {0.0};
  v.device.couplings = {0.0};
  v.drive.channels = {{Ramp(0.0), 1.0}};
  v.order = 1;
  v.sign = 1;
  v.horizon = 20.0;
  v.samples = 20;
  const SidebandValidationReport r = validate_effective(v);
  CHECK(r.min_fidelity > 1.0 - 1e-10);
  CHECK(r.max_photon_deviation < 1e-10);
}

TEST_CASE("negative-detuning sideband amplifies phonons from vacuum") {
  SidebandValidation v;
  v.device.optical_frequencies = {0.0};
  v.device.couplings = {0.1};
  v.order = 1;
  v.horizon = 150.0;
  v.samples = 50;
  v.optical_dim = 5;
  v.mech_dim = 8;
  v.initial_occupations = {0, 0};

  v.sign = -1;
  v.drive.channels = {{Ramp(0.1), -1.0}};
  const SidebandValidationReport minus = validate_effective(v);
  v.sign = 1;
  v.drive.channels = {{Ramp(0.1), 1.0}};
  const SidebandValidationReport plus = validate_effective(v);

  double max_minus = 0.0, max_plus = 0.0;
  for (double n : minus.phonons_effective) max_minus = std::max(max_minus, n);
  for (double n : plus.phonons_effective) max_plus = std::max(max_plus, n);
  CHECK(max_minus > 0.1);
  CHECK(max_plus < 1e-2);
  CHECK(max_minus > 10.0 * max_plus);
  for (double n : minus.phonons_full) CHECK(n >= -1e-12);
}

TEST_CASE("sideband validation argument checks") {
  SidebandValidation v;
  v.device.optical_frequencies = {0.0};
  v.device.couplings = {0.05};
  v.drive.channels = {{Ramp(0.02), 1.0}};
  v.horizon = 0.0;
  CHECK_THROWS_AS(validate_effective(v), InvalidArgument);
  v.horizon = 1.0;
  v.drive.channels = {{Ramp(0.02), 0.5}};
  CHECK_THROWS_AS(validate_effective(v), InvalidArgument);
}

TEST_CASE("mean-field validation control without drive") {
  MeanFieldValidation v;
  v.device.optical_frequencies = {0.0, 0.0};
  v.device.couplings = {0.05, 0.05};
  v.drive.channels = {{Ramp(0.0), 1.1}, {Ramp(0.0), 2.2}};
  v.drive.offset = Ramp(0.1);
  v.beta1 = 1.0;
  v.beta2 = 1.0;
  v.optical_dim = 12;
  v.mech_dim = 6;
  v.horizon = 10.0;
  v.samples = 10;
  const MeanFieldValidationReport r = validate_mean_field(v);
  CHECK(r.min_fidelity >= 1.0 - 1e-8);
  CHECK(r.g1 == 0.0);
  CHECK(r.g2 == 0.0);
}
