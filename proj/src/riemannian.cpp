#include "hierhmc/riemannian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hierhmc {

namespace {
constexpr double kLargeArgument = 18.0;
constexpr double kSmallArgument = 1e-4;
}  // namespace

double softabs(double lambda, double alpha) {
  const double x = alpha * lambda;
  if (std::abs(x) > kLargeArgument) return std::abs(lambda);
  if (std::abs(x) < kSmallArgument) return 1.0 / alpha + alpha * lambda * lambda / 3.0;
  return lambda / std::tanh(x);
}

double softabs_derivative(double lambda, double alpha) {
  const double x = alpha * lambda;
  if (std::abs(x) > kLargeArgument) return std::copysign(1.0, lambda);
  if (std::abs(x) < kSmallArgument) return 2.0 * alpha * lambda / 3.0;
  const double sh = std::sinh(x);
  return 1.0 / std::tanh(x) - x / (sh * sh);
}

Vec MetricDecomposition::velocity(const Vec& p) const {
  return vectors * (vectors.transpose() * p).cwiseQuotient(regularized);
}

double MetricDecomposition::quadratic_kinetic(const Vec& p) const {
  const Vec rotated = vectors.transpose() * p;
  return 0.5 * rotated.cwiseAbs2().cwiseQuotient(regularized).sum();
}

Vec MetricDecomposition::sample_momentum(RngStream& rng) const {
  const Vec z = rng.normal_vector(regularized.size());
  return vectors * regularized.cwiseSqrt().cwiseProduct(z);
}

Matrix MetricDecomposition::metric() const {
  return vectors * regularized.asDiagonal() * vectors.transpose();
}

Matrix MetricDecomposition::divided_differences() const {
  const Eigen::Index d = eigenvalues.size();
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out(j, j) = softabs_derivative(eigenvalues(j), alpha);
    for (Eigen::Index k = j + 1; k < d; ++k) {
      const double lj = eigenvalues(j);
      const double lk = eigenvalues(k);
      const double gap = lj - lk;
      double value;
      if (std::abs(gap) > 1e-8 * (std::abs(lj) + std::abs(lk)) && std::abs(gap) > 1e-300) {
        value = (regularized(j) - regularized(k)) / gap;
      } else {
        value = softabs_derivative(0.5 * (lj + lk), alpha);
      }
      out(j, k) = value;
      out(k, j) = value;
    }
  }
  return out;
}

MetricDecomposition softabs_metric(const SymMatrix& potential_hessian, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("softabs_metric: alpha must be positive");
  EigenPair eig = eigh(potential_hessian, "SoftAbs metric Hessian");
  MetricDecomposition out;
  out.alpha = alpha;
  out.regularized.resize(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    out.regularized(i) = softabs(eig.values(i), alpha);
  }
  out.log_det = out.regularized.array().log().sum();
  out.eigenvalues = std::move(eig.values);
  out.vectors = std::move(eig.vectors);
  return out;
}

namespace {

// sum_{k,l} T(i, k, l) * m(k, l) for every i.
Vec contract(const Tensor3& t, const Matrix& m) {
  const Eigen::Index d = t.dim();
  const Eigen::Map<const Matrix> slices(t.data(), d * d, d);
  const Eigen::Map<const Vec> flat(m.data(), d * d);
  return slices.transpose() * flat;
}

}  // namespace

RiemannianGeometry::RiemannianGeometry(const TargetModel& model, Vec q, double alpha) : q_(std::move(q)) {
  logp_ = model.log_density_gradient(q_, grad_);
  if (!std::isfinite(logp_) || !grad_.allFinite()) {
    finite_ = false;
    return;
  }
  const SymMatrix hessian = -model.hessian(q_);
  if (!hessian.matrix().allFinite()) {
    finite_ = false;
    return;
  }
  metric_ = softabs_metric(hessian, alpha);
  potential_third_ = -model.third_derivatives(q_);
  divided_ = metric_.divided_differences();

  const Vec trace_weights = divided_.diagonal().cwiseQuotient(metric_.regularized);
  const Matrix a = metric_.vectors * trace_weights.asDiagonal() * metric_.vectors.transpose();
  position_force_ = -grad_ + 0.5 * contract(potential_third_, a);
  finite_ = position_force_.allFinite() && std::isfinite(metric_.log_det);
}

double RiemannianGeometry::kinetic(const Vec& p) const {
  return metric_.quadratic_kinetic(p) + 0.5 * metric_.log_det;
}

Vec RiemannianGeometry::dh_dq(const Vec& p) const {
  const Vec scaled = (metric_.vectors.transpose() * p).cwiseQuotient(metric_.regularized);
  const Matrix weighted = divided_.cwiseProduct(scaled * scaled.transpose());
  const Matrix b = metric_.vectors * weighted * metric_.vectors.transpose();
  return position_force_ - 0.5 * contract(potential_third_, b);
}

double rmhmc_hamiltonian(const Vec& q, const Vec& p, const TargetModel& model, double alpha) {
  const double logp = model.log_density(q);
  const MetricDecomposition m = softabs_metric(-model.hessian(q), alpha);
  return m.quadratic_kinetic(p) + 0.5 * m.log_det - logp;
}

bool generalized_leapfrog_step(RiemannianGeometry& geometry, Vec& p, double eps,
                               const TargetModel& model, const RiemannianSettings& settings,
                               long& n_evals) {
  const double half = 0.5 * eps;

  Vec p_half = p;
  bool converged = false;
  for (int it = 0; it < settings.fp_max; ++it) {
    Vec next = p - half * geometry.dh_dq(p_half);
    if (!next.allFinite()) return false;
    const double change = (next - p_half).cwiseAbs().maxCoeff();
    p_half = std::move(next);
    if (change < settings.fp_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) return false;

  const Vec& q = geometry.q();
  const Vec start_velocity = geometry.metric().velocity(p_half);
  Vec q_new = q + eps * start_velocity;
  converged = false;
  for (int it = 0; it < settings.fp_max; ++it) {
    const SymMatrix hessian = -model.hessian(q_new);
    ++n_evals;
    if (!hessian.matrix().allFinite()) return false;
    const MetricDecomposition metric = softabs_metric(hessian, settings.alpha);
    Vec next = q + half * (start_velocity + metric.velocity(p_half));
    if (!next.allFinite()) return false;
    const double change = (next - q_new).cwiseAbs().maxCoeff();
    q_new = std::move(next);
    if (change < settings.fp_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) return false;

  geometry = RiemannianGeometry(model, std::move(q_new), settings.alpha);
  ++n_evals;
  if (!geometry.finite()) return false;
  p = p_half - half * geometry.dh_dq(p_half);
  return p.allFinite();
}

GeneralizedLeapfrogResult generalized_leapfrog_step(const Vec& q, const Vec& p, double eps,
                                                    const TargetModel& model,
                                                    const RiemannianSettings& settings) {
  GeneralizedLeapfrogResult out;
  RiemannianGeometry geometry(model, q, settings.alpha);
  out.n_evals = 1;
  out.p = p;
  out.converged = geometry.finite() &&
                  generalized_leapfrog_step(geometry, out.p, eps, model, settings, out.n_evals);
  out.q = geometry.q();
  return out;
}

TransitionStats rmhmc_transition(ChainState& state, double eps, int steps, const TargetModel& model,
                                 const RiemannianSettings& settings, RngStream& rng) {
  if (!model.has_third_derivatives()) {
    throw ModelError("rmhmc_transition: model '" + model.name() + "' lacks third derivatives");
  }
  if (steps < 1) throw std::invalid_argument("rmhmc_transition: step count must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("rmhmc_transition: step size must be positive");

  TransitionStats stats;
  RiemannianGeometry geometry(model, state.q(), settings.alpha);
  stats.n_evals = 1;
  if (!geometry.finite()) throw std::domain_error("rmhmc_transition: geometry not finite at start");

  Vec p = geometry.metric().sample_momentum(rng);
  const EnergyPoint start{geometry.kinetic(p), geometry.potential()};
  const double h0 = start.hamiltonian();
  EnergyTracker tracker(start);

  double h = h0;
  for (int s = 0; s < steps; ++s) {
    const bool ok = generalized_leapfrog_step(geometry, p, eps, model, settings, stats.n_evals);
    ++stats.n_steps;
    if (!ok) {
      stats.divergent = true;
      break;
    }
    const EnergyPoint point{geometry.kinetic(p), geometry.potential()};
    tracker.observe(point);
    h = point.hamiltonian();
    if (!std::isfinite(h) || h - h0 > kMaxEnergyError) {
      stats.divergent = true;
      break;
    }
  }
  stats.max_delta_v = tracker.extremes().max_delta_v;
  stats.max_delta_t = tracker.extremes().max_delta_t;
  stats.max_abs_delta_h = tracker.extremes().max_abs_delta_h;

  if (stats.divergent) {
    stats.accept_stat = 0.0;
    stats.energy = h0;
    return stats;
  }
  const double log_ratio = h0 - h;
  stats.accept_stat = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (std::log(rng.uniform()) < log_ratio) {
    state.assign(geometry.q(), geometry.logp(), geometry.grad());
    stats.accepted = true;
    stats.energy = h;
  } else {
    stats.energy = h0;
  }
  return stats;
}

}  // namespace hierhmc
