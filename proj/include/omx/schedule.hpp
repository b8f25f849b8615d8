#pragma once

#include <utility>
#include <vector>

namespace omx {

// Adiabatic when max|dv/dt| / (omega_m * max|v|) is below this.
inline constexpr double kAdiabaticThreshold = 0.1;

struct AdiabaticityReport {
  double diagnostic = 0.0;
  bool adiabatic = true;
};

// Piecewise-linear schedule through time-sorted knots, constant outside the
// knot range.
class Ramp {
 public:
  using Knot = std::pair<double, double>;

  Ramp() : Ramp(0.0) {}
  explicit Ramp(double constant_value);
  explicit Ramp(std::vector<Knot> knots);

  double operator()(double t) const { return value(t); }
  double value(double t) const;

  const std::vector<Knot>& knots() const { return knots_; }
  bool is_constant() const;
  double max_abs_value() const;
  double min_value() const;
  double max_abs_slope() const;

  AdiabaticityReport adiabaticity(double omega_m) const;

  bool operator==(const Ramp&) const = default;

 private:
  std::vector<Knot> knots_;
};

// Throws InvalidArgument for empty or unsorted knots.
Ramp make_ramp(std::vector<Ramp::Knot> knots);

}  // namespace omx
