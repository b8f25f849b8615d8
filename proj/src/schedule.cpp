#include "omx/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "omx/errors.hpp"

namespace omx {

Ramp::Ramp(double constant_value) : knots_{{0.0, constant_value}} {}

Ramp::Ramp(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw InvalidArgument("ramp: at least one knot required");
  for (std::size_t k = 1; k < knots_.size(); ++k)
    if (!(knots_[k].first > knots_[k - 1].first))
      throw InvalidArgument("ramp: knot times must be strictly increasing");
  for (const auto& [t, v] : knots_)
    if (!std::isfinite(t) || !std::isfinite(v)) throw InvalidArgument("ramp: non-finite knot");
}

double Ramp::value(double t) const {
  if (t <= knots_.front().first) return knots_.front().second;
  if (t >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const Knot& k) { return x < k.first; });
  auto lo = hi - 1;
  const double s = (t - lo->first) / (hi->first - lo->first);
  return lo->second + s * (hi->second - lo->second);
}

bool Ramp::is_constant() const {
  return std::all_of(knots_.begin(), knots_.end(),
                     [&](const Knot& k) { return k.second == knots_.front().second; });
}

double Ramp::max_abs_value() const {
  double m = 0.0;
  for (const auto& k : knots_) m = std::max(m, std::abs(k.second));
  return m;
}

double Ramp::min_value() const {
  double m = knots_.front().second;
  for (const auto& k : knots_) m = std::min(m, k.second);
  return m;
}

double Ramp::max_abs_slope() const {
  double m = 0.0;
  for (std::size_t k = 1; k < knots_.size(); ++k)
    m = std::max(m, std::abs((knots_[k].second - knots_[k - 1].second) /
                             (knots_[k].first - knots_[k - 1].first)));
  return m;
}

AdiabaticityReport Ramp::adiabaticity(double omega_m) const {
  if (!(omega_m > 0.0)) throw InvalidArgument("adiabaticity: omega_m must be positive");
  const double scale = max_abs_value();
  AdiabaticityReport r;
  r.diagnostic = scale == 0.0 ? 0.0 : max_abs_slope() / (scale * omega_m);
  r.adiabatic = r.diagnostic < kAdiabaticThreshold;
  return r;
}

Ramp make_ramp(std::vector<Ramp::Knot> knots) { return Ramp(std::move(knots)); }

}  // namespace omx
