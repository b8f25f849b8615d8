#include "omx/analysis.hpp"

#include <algorithm>
#include <map>
#include <cmath>
#include <numbers>

#include "omx/errors.hpp"

namespace omx {

EigenPair lowest_eigenpair(const Operator& h) {
  if (h.hermiticity_error() > kHermitianTolerance)
    throw InvalidArgument("ground state: operator is not Hermitian");
  const DenseMatrix m = h.dense();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
  if (es.info() != Eigen::Success) throw Error("ground state: eigensolver failed");
  const double e = es.eigenvalues()(0);
  Vector v = es.eigenvectors().col(0);
  // Fix the global phase: largest component real and positive.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::polar(1.0, -std::arg(v(imax)));
  const double residual = (m * v - e * v).norm();
  return {e, StateVector(h.space(), v).normalized(), residual};
}

GroundState ground_state(const Operator& h) {
  EigenPair p = lowest_eigenpair(h);
  return {p.energy, std::move(p.state), p.residual, static_cast<int>(h.dim()), 0.0, false};
}

namespace {

// Overlap of ground states of a single-mode family at dims n and 2n.
double padded_fidelity(const StateVector& small, const StateVector& large) {
  const Eigen::Index n = small.dim();
  const cplx overlap = large.amplitudes().head(n).dot(small.amplitudes());
  return std::norm(overlap) / (small.amplitudes().squaredNorm() * large.amplitudes().squaredNorm());
}

}  // namespace

GroundState ground_state(const HamiltonianFactory& factory, int start_dim, int max_dim) {
  if (start_dim < 2 || max_dim < 2 * start_dim)
    throw InvalidArgument("ground_state: need 2 <= start_dim and max_dim >= 2 * start_dim");
  int dim = start_dim;
  EigenPair current = lowest_eigenpair(factory(dim));
  if (current.state.space().num_modes() != 1)
    throw InvalidArgument("ground_state: convergence doubling requires a single-mode family");
  while (true) {
    EigenPair doubled = lowest_eigenpair(factory(2 * dim));
    const double f = padded_fidelity(current.state, doubled.state);
    const bool ok = f > 1.0 - kGroundStateConvergence;
    if (ok || 4 * dim > max_dim)
      return {current.energy, std::move(current.state), current.residual, dim, f, ok};
    current = std::move(doubled);
    dim *= 2;
  }
}

SqueezingReport quadrature_variances(const DensityMatrix& rho) {
  const CompositeSpace& space = rho.space();
  if (space.num_modes() != 1) throw InvalidArgument("quadrature_variances: single-mode state required");
  const std::string& mode = space.labels().front();
  const Operator x = quadrature_x(space, mode);
  const Operator y = quadrature_y(space, mode);
  const double mx = expectation(rho, x).real();
  const double my = expectation(rho, y).real();
  SqueezingReport r;
  r.var_x = expectation(rho, compose(x, x)).real() - mx * mx;
  r.var_y = expectation(rho, compose(y, y)).real() - my * my;
  r.uncertainty_product = r.var_x * r.var_y;
  r.squeezing_db = 10.0 * std::log10(2.0 * std::min(r.var_x, r.var_y));
  r.mean_b = expectation(rho, mode_annihilation(space, mode));
  return r;
}

SqueezingReport quadrature_variances(const StateVector& psi) {
  const CompositeSpace& space = psi.space();
  if (space.num_modes() != 1) throw InvalidArgument("quadrature_variances: single-mode state required");
  const std::string& mode = space.labels().front();
  const Operator x = quadrature_x(space, mode);
  const Operator y = quadrature_y(space, mode);
  const double nrm = psi.amplitudes().squaredNorm();
  const Vector xv = x.matrix() * psi.amplitudes();
  const Vector yv = y.matrix() * psi.amplitudes();
  const double mx = psi.amplitudes().dot(xv).real() / nrm;
  const double my = psi.amplitudes().dot(yv).real() / nrm;
  SqueezingReport r;
  r.var_x = xv.squaredNorm() / nrm - mx * mx;
  r.var_y = yv.squaredNorm() / nrm - my * my;
  r.uncertainty_product = r.var_x * r.var_y;
  r.squeezing_db = 10.0 * std::log10(2.0 * std::min(r.var_x, r.var_y));
  r.mean_b = expectation(psi, mode_annihilation(space, mode)) / nrm;
  return r;
}

int AxisSpec::nearest(double v) const {
  if (count < 2) return 0;
  const int i = static_cast<int>(std::lround((v - min) / step()));
  return std::clamp(i, 0, count - 1);
}

QFunctionGrid::QFunctionGrid(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid_.re.count) * grid_.im.count)
    throw InvalidArgument("QFunctionGrid: value count does not match grid");
  const double hr = grid_.re.step();
  const double hi = grid_.im.step();
  double sum = 0.0;
  for (int i = 0; i < grid_.im.count; ++i) {
    const double wi = (i == 0 || i == grid_.im.count - 1) ? 0.5 : 1.0;
    for (int r = 0; r < grid_.re.count; ++r) {
      const double wr = (r == 0 || r == grid_.re.count - 1) ? 0.5 : 1.0;
      sum += wi * wr * value(r, i);
    }
  }
  normalization_ = sum * hr * hi;
}

double QFunctionGrid::value(int i_re, int i_im) const {
  return values_[static_cast<std::size_t>(i_im) * grid_.re.count + i_re];
}

std::pair<int, int> QFunctionGrid::peak() const {
  const auto it = std::max_element(values_.begin(), values_.end());
  const auto idx = static_cast<int>(it - values_.begin());
  return {idx % grid_.re.count, idx / grid_.re.count};
}

GridMoments QFunctionGrid::moments() const {
  GridMoments m;
  double w = 0.0;
  for (int i = 0; i < grid_.im.count; ++i)
    for (int r = 0; r < grid_.re.count; ++r) {
      const double q = value(r, i);
      w += q;
      m.mean_re += q * grid_.re.at(r);
      m.mean_im += q * grid_.im.at(i);
    }
  m.mean_re /= w;
  m.mean_im /= w;
  for (int i = 0; i < grid_.im.count; ++i)
    for (int r = 0; r < grid_.re.count; ++r) {
      const double q = value(r, i);
      const double dr = grid_.re.at(r) - m.mean_re;
      const double di = grid_.im.at(i) - m.mean_im;
      m.var_re += q * dr * dr;
      m.var_im += q * di * di;
      m.cov += q * dr * di;
    }
  m.var_re /= w;
  m.var_im /= w;
  m.cov /= w;
  return m;
}

namespace {

void check_grid(const GridSpec& g) {
  if (g.re.count < kMinGridPoints || g.im.count < kMinGridPoints)
    throw InvalidArgument("husimi_q: grid too coarse, need at least " +
                          std::to_string(kMinGridPoints) + " points per axis");
  if (!(g.re.max > g.re.min) || !(g.im.max > g.im.min))
    throw InvalidArgument("husimi_q: empty grid range");
}

template <typename Quadratic>
QFunctionGrid evaluate_q(const GridSpec& grid, int dim, Quadratic&& quad) {
  check_grid(grid);
  std::vector<double> values(static_cast<std::size_t>(grid.re.count) * grid.im.count);
  for (int i = 0; i < grid.im.count; ++i)
    for (int r = 0; r < grid.re.count; ++r) {
      const Vector c = coherent_amplitudes(dim, cplx(grid.re.at(r), grid.im.at(i)));
      values[static_cast<std::size_t>(i) * grid.re.count + r] =
          std::max(0.0, quad(c)) / std::numbers::pi;
    }
  return QFunctionGrid(grid, std::move(values));
}

}  // namespace

QFunctionGrid husimi_q(const StateVector& psi, const GridSpec& grid) {
  if (psi.space().num_modes() != 1) throw InvalidArgument("husimi_q: single-mode state required");
  const Vector& v = psi.amplitudes();
  return evaluate_q(grid, static_cast<int>(psi.dim()),
                    [&](const Vector& c) { return std::norm(c.dot(v)); });
}

QFunctionGrid husimi_q(const DensityMatrix& rho, const GridSpec& grid) {
  if (rho.space().num_modes() != 1) throw InvalidArgument("husimi_q: single-mode state required");
  const DenseMatrix& m = rho.matrix();
  return evaluate_q(grid, static_cast<int>(rho.dim()),
                    [&](const Vector& c) { return c.dot(m * c).real(); });
}

GridSpec default_grid(const SqueezingReport& report, int points, double span_sigma) {
  const double sigma = std::sqrt(std::max(report.var_x, report.var_y));
  const double centre = std::max(std::abs(report.mean_b.real()), std::abs(report.mean_b.imag()));
  const double half = centre + span_sigma * sigma;
  return {{-half, half, points}, {-half, half, points}};
}

double fidelity(const StateVector& a, const StateVector& b) {
  require_same_space(a.space(), b.space(), "fidelity");
  const double na = a.amplitudes().squaredNorm();
  const double nb = b.amplitudes().squaredNorm();
  return std::clamp(std::norm(a.amplitudes().dot(b.amplitudes())) / (na * nb), 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  require_same_space(rho.space(), psi.space(), "fidelity");
  const Vector& v = psi.amplitudes();
  const double f = v.dot(rho.matrix() * v).real() / v.squaredNorm();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const StateVector& psi, const DensityMatrix& rho) { return fidelity(rho, psi); }

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_space(rho.space(), sigma.space(), "fidelity");
  auto psd_sqrt = [](const DenseMatrix& m) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (m + m.adjoint()));
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return DenseMatrix(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
  };
  const DenseMatrix s = psd_sqrt(rho.matrix());
  const DenseMatrix inner = s * sigma.matrix() * s;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (inner + inner.adjoint()),
                                                Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

RegimeClassification classify_regime(const ParametricModel& model) {
  if (model.epsilon == 0.0) throw DomainError("classify_regime: proximity undefined for epsilon = 0");
  return {regime_of(model), (model.epsilon - 2.0 * model.g2) / model.epsilon};
}

}  // namespace omx

namespace omx {

SpectrumReport undriven_spectrum(const CompositeSpace& space, const DeviceParams& dev) {
  dev.validate();
  DriveSchedule drive;
  drive.channels.assign(dev.num_optical(), DriveChannel{});
  const Operator h = multimode_om_hamiltonian(space, dev, drive, 0.0);
  const std::size_t mech = space.index_of(kMechMode);
  const int dm = space.dims()[mech];

  auto sector_of = [&](Eigen::Index i) {
    std::vector<int> occ = space.occupations(i);
    occ.erase(occ.begin() + static_cast<std::ptrdiff_t>(mech));
    return occ;
  };

  SpectrumReport r;
  std::map<std::vector<int>, std::vector<Eigen::Index>> sectors;
  for (Eigen::Index i = 0; i < space.total_dim(); ++i) sectors[sector_of(i)].push_back(i);
  for (Eigen::Index row = 0; row < h.matrix().outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(h.matrix(), row); it; ++it)
      if (sector_of(row) != sector_of(it.col()))
        r.off_sector_norm = std::max(r.off_sector_norm, std::abs(it.value()));

  const DenseMatrix full = h.dense();
  for (const auto& [optical, idx] : sectors) {
    DenseMatrix block(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) block(a, b) = full(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(block, Eigen::EigenvaluesOnly);

    double base = 0.0;
    double shift = 0.0;
    for (std::size_t j = 0; j < optical.size(); ++j) {
      base += dev.optical_frequencies[j] * optical[j];
      shift += dev.alpha(j) * optical[j];
      for (std::size_t k = 0; k < optical.size(); ++k) base -= dev.kerr(j, k) * optical[j] * optical[k];
    }
    const double guard = shift == 0.0 ? 0.0 : std::ceil(recommended_dim(std::abs(shift)));
    for (int nb = 0; nb < dm; ++nb) {
      SpectrumLevel level;
      level.occupations = optical;
      level.occupations.insert(level.occupations.begin() + static_cast<std::ptrdiff_t>(mech), nb);
      level.eigenvalue = es.eigenvalues()(nb);
      level.predicted = base + dev.mechanical_frequency * nb;
      level.trusted = nb < dm - guard;
      const double dev_abs = std::abs(level.eigenvalue - level.predicted);
      r.max_deviation_all = std::max(r.max_deviation_all, dev_abs);
      if (level.trusted) {
        r.max_deviation = std::max(r.max_deviation, dev_abs);
        ++r.trusted_levels;
      }
      r.levels.push_back(std::move(level));
    }
  }
  return r;
}

}  // namespace omx
