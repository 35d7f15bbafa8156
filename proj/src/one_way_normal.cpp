#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hierhmc/densities.hpp"
#include "hierhmc/models.hpp"

namespace hierhmc {

namespace {

// log(1 + exp(x)) without overflow.
double log1p_exp(double x) { return x > 35.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Half-Cauchy prior on tau = exp(lambda) plus the log-Jacobian lambda, and
// its first three derivatives in lambda.
struct TauPrior {
  double value, d1, d2, d3;

  explicit TauPrior(double lambda) {
    const double x = 2.0 * lambda - 2.0 * std::log(kTauPriorScale);
    const double s = logistic(x);
    value = std::numbers::ln2 - std::log(std::numbers::pi * kTauPriorScale) - log1p_exp(x) + lambda;
    d1 = 1.0 - 2.0 * s;
    d2 = -4.0 * s * (1.0 - s);
    d3 = -8.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  }
};

constexpr double kMuPrecision = 1.0 / (kMuPriorSd * kMuPriorSd);

double mu_prior(double mu) { return normal_logpdf(mu, 0.0, kMuPriorSd); }

std::vector<std::string> hyper_names() { return {"mu", "lambda"}; }

std::vector<double> precisions(const OneWayNormalData& data) {
  std::vector<double> out;
  out.reserve(data.sigma.size());
  for (double s : data.sigma) out.push_back(1.0 / (s * s));
  return out;
}

double likelihood_norm(const OneWayNormalData& data) {
  double out = 0.0;
  for (double s : data.sigma) out -= std::log(s) + kHalfLog2Pi;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Centered

OneWayNormalCP::OneWayNormalCP(OneWayNormalData data) : data_(std::move(data)) {
  data_.validate();
  precision_ = precisions(data_);
  log_norm_ = likelihood_norm(data_) - data_.groups() * kHalfLog2Pi;
}

std::vector<std::string> OneWayNormalCP::parameter_names() const {
  auto names = hyper_names();
  for (int j = 1; j <= data_.groups(); ++j) names.push_back("theta." + std::to_string(j));
  return names;
}

std::vector<std::string> OneWayNormalCP::output_names() const {
  std::vector<std::string> names{"mu", "tau"};
  for (int j = 1; j <= data_.groups(); ++j) names.push_back("theta." + std::to_string(j));
  return names;
}

Vec OneWayNormalCP::constrain(const Vec& q) const {
  check_dim(q);
  Vec out = q;
  out(1) = positive_constrain(q(1));
  return out;
}

double OneWayNormalCP::log_density(const Vec& q) const {
  Vec grad;
  return log_density_gradient(q, grad);
}

double OneWayNormalCP::log_density_gradient(const Vec& q, Vec& grad) const {
  check_dim(q);
  const int groups = data_.groups();
  const double mu = q(0);
  const double lambda = q(1);
  const double w = std::exp(-2.0 * lambda);
  const TauPrior tau_prior(lambda);

  grad.resize(dim());
  double lp = log_norm_ + mu_prior(mu) + tau_prior.value - groups * lambda;
  double sum_r = 0.0;
  double sum_r2 = 0.0;
  for (int j = 0; j < groups; ++j) {
    const double theta = q(j + 2);
    const double e = data_.y[j] - theta;
    const double r = theta - mu;
    lp -= 0.5 * (e * e * precision_[j] + r * r * w);
    sum_r += r;
    sum_r2 += r * r;
    grad(j + 2) = e * precision_[j] - r * w;
  }
  grad(0) = sum_r * w - mu * kMuPrecision;
  grad(1) = -groups + sum_r2 * w + tau_prior.d1;
  return lp;
}

SymMatrix OneWayNormalCP::hessian(const Vec& q) const {
  check_dim(q);
  const int groups = data_.groups();
  const double mu = q(0);
  const double lambda = q(1);
  const double w = std::exp(-2.0 * lambda);
  const TauPrior tau_prior(lambda);

  SymMatrix h(dim());
  double sum_r = 0.0;
  double sum_r2 = 0.0;
  for (int j = 0; j < groups; ++j) {
    const double r = q(j + 2) - mu;
    sum_r += r;
    sum_r2 += r * r;
    h.set(0, j + 2, w);
    h.set(1, j + 2, 2.0 * r * w);
    h.set(j + 2, j + 2, -precision_[j] - w);
  }
  h.set(0, 0, -groups * w - kMuPrecision);
  h.set(0, 1, -2.0 * sum_r * w);
  h.set(1, 1, -2.0 * sum_r2 * w + tau_prior.d2);
  return h;
}

Tensor3 OneWayNormalCP::third_derivatives(const Vec& q) const {
  check_dim(q);
  const int groups = data_.groups();
  const double mu = q(0);
  const double lambda = q(1);
  const double w = std::exp(-2.0 * lambda);
  const TauPrior tau_prior(lambda);

  Tensor3 t(dim());
  double sum_r = 0.0;
  double sum_r2 = 0.0;
  for (int j = 0; j < groups; ++j) {
    const double r = q(j + 2) - mu;
    sum_r += r;
    sum_r2 += r * r;
    t.set_symmetric(0, 1, j + 2, -2.0 * w);
    t.set_symmetric(1, 1, j + 2, -4.0 * r * w);
    t.set_symmetric(1, j + 2, j + 2, 2.0 * w);
  }
  t.set_symmetric(0, 0, 1, 2.0 * groups * w);
  t.set_symmetric(0, 1, 1, 4.0 * sum_r * w);
  t.set_symmetric(1, 1, 1, 4.0 * sum_r2 * w + tau_prior.d3);
  return t;
}

// ---------------------------------------------------------------------------
// Non-centered

OneWayNormalNCP::OneWayNormalNCP(OneWayNormalData data) : data_(std::move(data)) {
  data_.validate();
  precision_ = precisions(data_);
  log_norm_ = likelihood_norm(data_) - data_.groups() * kHalfLog2Pi;
}

std::vector<std::string> OneWayNormalNCP::parameter_names() const {
  auto names = hyper_names();
  for (int j = 1; j <= data_.groups(); ++j) names.push_back("var_theta." + std::to_string(j));
  return names;
}

std::vector<std::string> OneWayNormalNCP::output_names() const {
  std::vector<std::string> names{"mu", "tau"};
  for (int j = 1; j <= data_.groups(); ++j) names.push_back("var_theta." + std::to_string(j));
  for (int j = 1; j <= data_.groups(); ++j) names.push_back("theta." + std::to_string(j));
  return names;
}

Vec OneWayNormalNCP::constrain(const Vec& q) const {
  check_dim(q);
  const int groups = data_.groups();
  const double tau = positive_constrain(q(1));
  Vec out(2 + 2 * groups);
  out(0) = q(0);
  out(1) = tau;
  for (int j = 0; j < groups; ++j) {
    out(2 + j) = q(2 + j);
    out(2 + groups + j) = tau * q(2 + j) + q(0);
  }
  return out;
}

double OneWayNormalNCP::log_density(const Vec& q) const {
  Vec grad;
  return log_density_gradient(q, grad);
}

double OneWayNormalNCP::log_density_gradient(const Vec& q, Vec& grad) const {
  check_dim(q);
  const int groups = data_.groups();
  const double mu = q(0);
  const double lambda = q(1);
  const double tau = std::exp(lambda);
  const TauPrior tau_prior(lambda);

  grad.resize(dim());
  double lp = log_norm_ + mu_prior(mu) + tau_prior.value;
  double sum_e = 0.0;
  double sum_e_scaled = 0.0;
  for (int j = 0; j < groups; ++j) {
    const double raw = q(j + 2);
    const double resid = data_.y[j] - (tau * raw + mu);
    const double e = resid * precision_[j];
    lp -= 0.5 * (resid * e + raw * raw);
    sum_e += e;
    sum_e_scaled += e * tau * raw;
    grad(j + 2) = e * tau - raw;
  }
  grad(0) = sum_e - mu * kMuPrecision;
  grad(1) = sum_e_scaled + tau_prior.d1;
  return lp;
}

SymMatrix OneWayNormalNCP::hessian(const Vec& q) const {
  check_dim(q);
  const int groups = data_.groups();
  const double mu = q(0);
  const double lambda = q(1);
  const double tau = std::exp(lambda);
  const TauPrior tau_prior(lambda);

  SymMatrix h(dim());
  double mu_mu = -kMuPrecision;
  double mu_lambda = 0.0;
  double lambda_lambda = tau_prior.d2;
  for (int j = 0; j < groups; ++j) {
    const double raw = q(j + 2);
    const double a = precision_[j];
    const double e = (data_.y[j] - (tau * raw + mu)) * a;
    mu_mu -= a;
    mu_lambda -= a * tau * raw;
    lambda_lambda += -a * tau * tau * raw * raw + e * tau * raw;
    h.set(0, j + 2, -a * tau);
    h.set(1, j + 2, -a * tau * tau * raw + e * tau);
    h.set(j + 2, j + 2, -a * tau * tau - 1.0);
  }
  h.set(0, 0, mu_mu);
  h.set(0, 1, mu_lambda);
  h.set(1, 1, lambda_lambda);
  return h;
}

Tensor3 OneWayNormalNCP::third_derivatives(const Vec& q) const {
  check_dim(q);
  const int groups = data_.groups();
  const double mu = q(0);
  const double lambda = q(1);
  const double tau = std::exp(lambda);
  const TauPrior tau_prior(lambda);

  Tensor3 t(dim());
  double mu_lambda_lambda = 0.0;
  double lambda3 = tau_prior.d3;
  for (int j = 0; j < groups; ++j) {
    const double raw = q(j + 2);
    const double a = precision_[j];
    const double e = (data_.y[j] - (tau * raw + mu)) * a;
    mu_lambda_lambda -= a * tau * raw;
    lambda3 += -3.0 * a * tau * tau * raw * raw + e * tau * raw;
    t.set_symmetric(0, 1, j + 2, -a * tau);
    t.set_symmetric(1, 1, j + 2, -3.0 * a * tau * tau * raw + e * tau);
    t.set_symmetric(1, j + 2, j + 2, -2.0 * a * tau * tau);
  }
  t.set_symmetric(0, 1, 1, mu_lambda_lambda);
  t.set_symmetric(1, 1, 1, lambda3);
  return t;
}

}  // namespace hierhmc
