#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "hierhmc/model.hpp"
#include "hierhmc/random.hpp"

namespace hierhmc {

/// Funnel: theta_i ~ N(0, exp(v/2)^2) for i = 1..n and v ~ N(0, 3^2).
/// Position order is (theta_1, ..., theta_n, v).
class FunnelModel final : public TargetModel {
 public:
  explicit FunnelModel(int n);

  static constexpr int kDefaultSize = 25;
  static constexpr int kScanSize = 50;
  static constexpr int kRandomWalkSize = 100;

  int n() const { return n_; }

  std::string name() const override { return "funnel"; }
  Eigen::Index dim() const override { return n_ + 1; }
  std::vector<std::string> parameter_names() const override;
  double log_density(const Vec& q) const override;
  double log_density_gradient(const Vec& q, Vec& grad) const override;
  SymMatrix hessian(const Vec& q) const override;
  bool has_third_derivatives() const override { return true; }
  Tensor3 third_derivatives(const Vec& q) const override;
  std::string slowest_parameter() const override { return "v"; }

 private:
  int n_;
};

/// Multivariate normal with fixed mean and covariance. Its Hessian is
/// constant and its third derivatives vanish.
class GaussianModel final : public TargetModel {
 public:
  GaussianModel(Vec mean, const SymMatrix& covariance);
  static GaussianModel standard(Eigen::Index dim);

  std::string name() const override { return "gaussian"; }
  Eigen::Index dim() const override { return mean_.size(); }
  std::vector<std::string> parameter_names() const override;
  double log_density(const Vec& q) const override;
  double log_density_gradient(const Vec& q, Vec& grad) const override;
  SymMatrix hessian(const Vec& q) const override;
  bool has_third_derivatives() const override { return true; }
  Tensor3 third_derivatives(const Vec& q) const override;

 private:
  Vec mean_;
  Matrix precision_;
  double log_norm_;
};

/// Observations and known measurement sds for the one-way normal model.
struct OneWayNormalData {
  std::vector<double> y;
  std::vector<double> sigma;

  int groups() const { return static_cast<int>(y.size()); }
  void validate() const;
};

/// theta_i ~ N(mu, tau^2), y_i ~ N(theta_i, sigma^2), sigma_i = sigma.
OneWayNormalData generate_pseudodata(double mu, double tau, double sigma, int groups, RngStream& rng);

/// Plain-text form: lines "J <count>", "y <values...>", "sigma <values...>";
/// values may wrap across lines.
void write_dataset_text(const OneWayNormalData& data, const std::filesystem::path& path);
void write_dataset_json(const OneWayNormalData& data, const std::filesystem::path& path);
/// Reads either form; JSON is recognised by a leading '{'.
OneWayNormalData read_dataset(const std::filesystem::path& path);

inline constexpr double kMuPriorSd = 5.0;
inline constexpr double kTauPriorScale = 2.5;

/// Centered one-way normal. Position (mu, lambda = log tau, theta_1..theta_J).
class OneWayNormalCP final : public TargetModel {
 public:
  explicit OneWayNormalCP(OneWayNormalData data);

  const OneWayNormalData& data() const { return data_; }

  std::string name() const override { return "oneway-cp"; }
  Eigen::Index dim() const override { return data_.groups() + 2; }
  std::vector<std::string> parameter_names() const override;
  double log_density(const Vec& q) const override;
  double log_density_gradient(const Vec& q, Vec& grad) const override;
  SymMatrix hessian(const Vec& q) const override;
  bool has_third_derivatives() const override { return true; }
  Tensor3 third_derivatives(const Vec& q) const override;
  std::vector<std::string> output_names() const override;
  Vec constrain(const Vec& q) const override;
  std::string slowest_parameter() const override { return "tau"; }

 private:
  OneWayNormalData data_;
  std::vector<double> precision_;
  double log_norm_;
};

/// Non-centered one-way normal. Position (mu, lambda, var_theta_1..J) with
/// theta_j = exp(lambda) * var_theta_j + mu reported as output.
class OneWayNormalNCP final : public TargetModel {
 public:
  explicit OneWayNormalNCP(OneWayNormalData data);

  const OneWayNormalData& data() const { return data_; }

  std::string name() const override { return "oneway-ncp"; }
  Eigen::Index dim() const override { return data_.groups() + 2; }
  std::vector<std::string> parameter_names() const override;
  double log_density(const Vec& q) const override;
  double log_density_gradient(const Vec& q, Vec& grad) const override;
  SymMatrix hessian(const Vec& q) const override;
  bool has_third_derivatives() const override { return true; }
  Tensor3 third_derivatives(const Vec& q) const override;
  std::vector<std::string> output_names() const override;
  Vec constrain(const Vec& q) const override;
  std::string slowest_parameter() const override { return "tau"; }

 private:
  OneWayNormalData data_;
  std::vector<double> precision_;
  double log_norm_;
};

}  // namespace hierhmc
