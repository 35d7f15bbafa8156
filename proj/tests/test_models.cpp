#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "hierhmc/densities.hpp"
#include "hierhmc/models.hpp"

using namespace hierhmc;

namespace {

double rel_err(const Matrix& a, const Matrix& b) { return max_abs(a - b) / std::max(1.0, max_abs(b)); }

Vec analytic_gradient(const TargetModel& m, const Vec& q) {
  Vec g;
  m.log_density_gradient(q, g);
  return g;
}

OneWayNormalData small_data() {
  OneWayNormalData d;
  d.y = {28.0, 8.0, -3.0, 7.0, -1.0, 1.0, 18.0, 12.0};
  d.sigma = {15.0, 10.0, 16.0, 11.0, 9.0, 11.0, 10.0, 18.0};
  return d;
}

struct Case {
  std::string label;
  std::shared_ptr<TargetModel> model;
};

std::vector<Case> all_models() {
  Matrix c(3, 3);
  c << 2.0, 0.3, -0.2, 0.3, 1.0, 0.1, -0.2, 0.1, 0.5;
  return {
      {"funnel", std::make_shared<FunnelModel>(5)},
      {"gaussian", std::make_shared<GaussianModel>((Vec(3) << 1.0, -2.0, 0.5).finished(), SymMatrix(c))},
      {"cp", std::make_shared<OneWayNormalCP>(small_data())},
      {"ncp", std::make_shared<OneWayNormalNCP>(small_data())},
  };
}

std::vector<Vec> probe_points(Eigen::Index d) {
  RngStream rng(3, 0);
  std::vector<Vec> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(rng.normal_vector(d));
  pts.push_back(Vec::Zero(d));
  return pts;
}

}  // namespace

TEST(ModelDerivatives, GradientMatchesFiniteDifferences) {
  for (const auto& [label, m] : all_models()) {
    for (const Vec& q : probe_points(m->dim())) {
      const ScalarField f = [&](const Vec& x) { return m->log_density(x); };
      Vec g;
      const double lp = m->log_density_gradient(q, g);
      EXPECT_NEAR(lp, m->log_density(q), 1e-12 * std::max(1.0, std::abs(lp))) << label;
      EXPECT_LT(rel_err(g, finite_diff_gradient(f, q, 1e-5)), 1e-6) << label;
    }
  }
}

TEST(ModelDerivatives, HessianMatchesFiniteDifferences) {
  for (const auto& [label, m] : all_models()) {
    for (const Vec& q : probe_points(m->dim())) {
      const VectorField g = [&](const Vec& x) { return analytic_gradient(*m, x); };
      Matrix fd = finite_diff_jacobian(g, q, 1e-5);
      fd = 0.5 * (fd + fd.transpose());
      EXPECT_LT(rel_err(m->hessian(q).matrix(), fd), 1e-4) << label;
    }
  }
}

TEST(ModelDerivatives, ThirdDerivativesMatchFiniteDifferences) {
  for (const auto& [label, m] : all_models()) {
    ASSERT_TRUE(m->has_third_derivatives());
    const Eigen::Index d = m->dim();
    for (const Vec& q : probe_points(d)) {
      const Tensor3 t = m->third_derivatives(q);
      const double h = 1e-5;
      for (Eigen::Index i = 0; i < d; ++i) {
        Vec qp = q, qm = q;
        qp(i) += h;
        qm(i) -= h;
        const Matrix fd = (m->hessian(qp).matrix() - m->hessian(qm).matrix()) / (2.0 * h);
        EXPECT_LT(rel_err(Matrix(t.slice(i)), fd), 1e-4) << label << " slice " << i;
      }
    }
  }
}

TEST(ModelDerivatives, EvaluateAllAgrees) {
  const FunnelModel m(4);
  const Vec q = Vec::LinSpaced(5, -1.0, 1.0);
  const Derivatives d = evaluate_all(m, q);
  EXPECT_DOUBLE_EQ(d.logp, m.log_density(q));
  EXPECT_EQ(max_abs(d.grad - analytic_gradient(m, q)), 0.0);
  ASSERT_TRUE(d.third.has_value());
}

TEST(Funnel, LogDensityOracle) {
  const FunnelModel m(3);
  Vec q(4);
  q << 0.5, -1.0, 2.0, 0.7;
  const double sd = std::exp(q(3) / 2.0);
  double expected = normal_logpdf(q(3), 0.0, 3.0);
  for (int i = 0; i < 3; ++i) expected += normal_logpdf(q(i), 0.0, sd);
  EXPECT_NEAR(m.log_density(q), expected, 1e-13);
  EXPECT_EQ(m.parameter_names().back(), "v");
  EXPECT_EQ(m.parameter_names().front(), "theta.1");
  EXPECT_THROW(m.log_density(Vec::Zero(3)), std::invalid_argument);
  EXPECT_THROW(FunnelModel(0), ModelError);
}

TEST(Gaussian, StandardOracle) {
  const GaussianModel m = GaussianModel::standard(2);
  Vec q(2);
  q << 0.3, -1.1;
  EXPECT_NEAR(m.log_density(q), normal_logpdf(0.3, 0, 1) + normal_logpdf(-1.1, 0, 1), 1e-14);
  EXPECT_EQ(m.parameter_names()[1], "x.2");
}

TEST(OneWayNormal, CenteredOracle) {
  const OneWayNormalData data = small_data();
  const OneWayNormalCP m(data);
  RngStream rng(1, 0);
  const Vec q = rng.normal_vector(m.dim());
  const double mu = q(0), lambda = q(1), tau = std::exp(lambda);
  double expected = normal_logpdf(mu, 0.0, kMuPriorSd) + half_cauchy_logpdf(tau, kTauPriorScale) + lambda;
  for (int j = 0; j < data.groups(); ++j) {
    expected += normal_logpdf(q(2 + j), mu, tau) + normal_logpdf(data.y[j], q(2 + j), data.sigma[j]);
  }
  EXPECT_NEAR(m.log_density(q), expected, 1e-12);
  const Vec out = m.constrain(q);
  EXPECT_EQ(m.output_names()[1], "tau");
  EXPECT_NEAR(out(1), tau, 1e-15);
  EXPECT_EQ(out(2), q(2));
}

TEST(OneWayNormal, NonCenteredOracle) {
  const OneWayNormalData data = small_data();
  const OneWayNormalNCP m(data);
  RngStream rng(2, 0);
  const Vec q = rng.normal_vector(m.dim());
  const double mu = q(0), lambda = q(1), tau = std::exp(lambda);
  double expected = normal_logpdf(mu, 0.0, kMuPriorSd) + half_cauchy_logpdf(tau, kTauPriorScale) + lambda;
  for (int j = 0; j < data.groups(); ++j) {
    expected += normal_logpdf(q(2 + j), 0.0, 1.0) + normal_logpdf(data.y[j], tau * q(2 + j) + mu, data.sigma[j]);
  }
  EXPECT_NEAR(m.log_density(q), expected, 1e-12);
  const auto names = m.output_names();
  const Vec out = m.constrain(q);
  ASSERT_EQ(static_cast<Eigen::Index>(names.size()), out.size());
  const auto theta1 = std::find(names.begin(), names.end(), "theta.1") - names.begin();
  EXPECT_NEAR(out(theta1), tau * q(2) + mu, 1e-14);
}

TEST(OneWayNormal, PositiveTransformRoundTrip) {
  for (double tau : {1e-3, 0.5, 3.0, 40.0}) {
    const PositiveTransform t = positive_unconstrain(tau);
    EXPECT_NEAR(positive_constrain(t.lambda), tau, 1e-14 * tau);
    EXPECT_NEAR(t.log_jacobian, t.lambda, 1e-15);
  }
}

TEST(Dataset, ValidateRejectsBadData) {
  OneWayNormalData d;
  EXPECT_THROW(d.validate(), ModelError);
  d.y = {1.0, 2.0};
  d.sigma = {1.0};
  EXPECT_THROW(d.validate(), ModelError);
  d.sigma = {1.0, 0.0};
  EXPECT_THROW(d.validate(), ModelError);
  EXPECT_THROW(OneWayNormalCP(OneWayNormalData{}), ModelError);
}

TEST(Dataset, ZeroTauPseudodataSharesTheta) {
  RngStream rng(4, 0);
  const OneWayNormalData d = generate_pseudodata(8.0, 0.0, 1e-9, 5, rng);
  ASSERT_EQ(d.groups(), 5);
  for (double y : d.y) EXPECT_NEAR(y, 8.0, 1e-6);
  RngStream again(4, 0);
  EXPECT_EQ(generate_pseudodata(8.0, 0.0, 1e-9, 5, again).y, d.y);
  EXPECT_THROW(generate_pseudodata(8.0, -1.0, 1.0, 5, rng), ModelError);
}

TEST(Dataset, PseudodataMoments) {
  RngStream rng(5, 0);
  const OneWayNormalData d = generate_pseudodata(8.0, 3.0, 10.0, 20000, rng);
  double mean = 0.0, sq = 0.0;
  for (double y : d.y) mean += y;
  mean /= d.groups();
  for (double y : d.y) sq += (y - mean) * (y - mean);
  EXPECT_NEAR(mean, 8.0, 0.35);
  EXPECT_NEAR(std::sqrt(sq / (d.groups() - 1)), std::sqrt(109.0), 0.3);
  for (double s : d.sigma) EXPECT_EQ(s, 10.0);
}

TEST(Dataset, TextAndJsonRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "hierhmc_dataset_test";
  std::filesystem::create_directories(dir);
  RngStream rng(6, 0);
  const OneWayNormalData d = generate_pseudodata(8.0, 3.0, 10.0, 37, rng);
  write_dataset_text(d, dir / "d.txt");
  write_dataset_json(d, dir / "d.json");
  for (const char* f : {"d.txt", "d.json"}) {
    const OneWayNormalData back = read_dataset(dir / f);
    EXPECT_EQ(back.y, d.y) << f;
    EXPECT_EQ(back.sigma, d.sigma) << f;
  }
  std::ofstream(dir / "bad.txt") << "J 3\ny 1 2\nsigma 1 1 1\n";
  EXPECT_THROW(read_dataset(dir / "bad.txt"), ModelError);
  EXPECT_THROW(read_dataset(dir / "missing.txt"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
