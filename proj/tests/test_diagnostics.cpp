#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hierhmc/diagnostics.hpp"
#include "hierhmc/models.hpp"
#include "hierhmc/random.hpp"

using namespace hierhmc;

namespace {

ChainSamples iid_chains(int chains, int n, std::uint64_t seed) {
  ChainSamples out(static_cast<std::size_t>(chains));
  for (int c = 0; c < chains; ++c) {
    RngStream rng(seed, static_cast<std::uint64_t>(c));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(c)].push_back(rng.normal());
  }
  return out;
}

ChainSamples ar1_chains(double rho, int chains, int n, std::uint64_t seed) {
  ChainSamples out(static_cast<std::size_t>(chains));
  for (int c = 0; c < chains; ++c) {
    RngStream rng(seed, static_cast<std::uint64_t>(c));
    double x = rng.normal() / std::sqrt(1.0 - rho * rho);
    for (int i = 0; i < n; ++i) {
      x = rho * x + rng.normal();
      out[static_cast<std::size_t>(c)].push_back(x);
    }
  }
  return out;
}

}  // namespace

TEST(SplitRhat, IidChainsNearOne) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double r = split_rhat(iid_chains(4, 1000, seed));
    EXPECT_GE(r, 0.99);
    EXPECT_LE(r, 1.05);
  }
}

TEST(SplitRhat, SeparatedChainsFlagged) {
  ChainSamples chains = iid_chains(4, 1000, 2);
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (double& x : chains[c]) x += 5.0 * static_cast<double>(c);
  EXPECT_GT(split_rhat(chains), 1.5);
}

TEST(SplitRhat, DetectsWithinChainTrend) {
  ChainSamples chains = iid_chains(1, 1000, 3);
  for (std::size_t i = 0; i < 1000; ++i) chains[0][i] += (i < 500 ? 0.0 : 4.0);
  EXPECT_GT(split_rhat(chains), 1.5);
}

TEST(SplitRhat, AffineInvariant) {
  const ChainSamples chains = ar1_chains(0.5, 4, 501, 4);
  ChainSamples moved = chains;
  for (auto& c : moved)
    for (double& x : c) x = -3.7 * x + 120.0;
  EXPECT_NEAR(split_rhat(chains), split_rhat(moved), 1e-12);
  EXPECT_NEAR(ess(chains), ess(moved), 1e-8);
}

TEST(SplitRhat, ConstantChainsGiveNaN) {
  const ChainSamples chains(4, std::vector<double>(100, 2.5));
  EXPECT_TRUE(std::isnan(split_rhat(chains)));
  EXPECT_TRUE(std::isnan(ess(chains)));
}

TEST(SplitRhat, RejectsMalformedInput) {
  EXPECT_THROW(split_rhat({}), std::invalid_argument);
  EXPECT_THROW(split_rhat({{1, 2, 3, 4}, {1, 2, 3}}), std::invalid_argument);
  EXPECT_THROW(split_rhat({{1, 2, 3}}), std::invalid_argument);
  EXPECT_THROW(ess({{1, 2, 3}}), std::invalid_argument);
}

TEST(Ess, IidCloseToDrawCount) {
  const double e = ess(iid_chains(4, 1000, 5));
  EXPECT_NEAR(e, 4000.0, 600.0);
  EXPECT_LE(e, 4000.0);
}

TEST(Ess, Ar1MatchesTheory) {
  const double rho = 0.9;
  const double n = 4 * 2500;
  const double expected = n * (1 - rho) / (1 + rho);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EXPECT_NEAR(ess(ar1_chains(rho, 4, 2500, seed)), expected, 0.25 * expected) << seed;
  }
}

TEST(Ess, RepeatedDrawsHalveInformation) {
  ChainSamples base = iid_chains(4, 1000, 6);
  ChainSamples doubled(4);
  for (std::size_t c = 0; c < 4; ++c)
    for (double x : base[c]) {
      doubled[c].push_back(x);
      doubled[c].push_back(x);
    }
  // Pairs have ESS around N / 2 of 8000.
  const double e = ess(doubled);
  EXPECT_LT(e, 5000.0);
  EXPECT_GT(e, 3000.0);
}

TEST(Ess, AntitheticDrawsAreCapped) {
  ChainSamples chains = iid_chains(2, 1000, 7);
  for (auto& c : chains)
    for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i - 1];
  EXPECT_LE(ess(chains), 2000.0);
}

TEST(Autocovariance, MatchesDirectSum) {
  const ChainSamples chains = ar1_chains(0.7, 1, 300, 8);
  const auto& x = chains[0];
  const auto fft = autocovariance(x);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  ASSERT_EQ(fft.size(), x.size());
  for (std::size_t lag : {0u, 1u, 5u, 50u, 299u}) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < x.size(); ++i) s += (x[i] - mean) * (x[i + lag] - mean);
    EXPECT_NEAR(fft[lag], s / x.size(), 1e-12) << lag;
  }
}

TEST(Summary, QuantilesAreTypeSeven) {
  std::vector<double> x;
  for (int i = 1; i <= 100; ++i) x.push_back(i);
  const SummaryRow row = summarize_parameter("x", {x});
  EXPECT_NEAR(row.q05, 5.95, 1e-12);
  EXPECT_NEAR(row.q50, 50.5, 1e-12);
  EXPECT_NEAR(row.q95, 95.05, 1e-12);
  EXPECT_NEAR(row.mean, 50.5, 1e-12);
  EXPECT_NEAR(row.sd, std::sqrt(100.0 * 101.0 / 12.0), 1e-12);
}

TEST(Summary, ConstantParameterGivesSentinels) {
  DrawMatrix draws({"a", "b"});
  RngStream rng(9, 0);
  for (int c = 0; c < 2; ++c) {
    const auto k = draws.add_chain();
    for (int i = 0; i < 50; ++i) {
      DrawStats s;
      s.transition.n_evals = 3;
      draws.append(k, (Vec(2) << 1.0, rng.normal()).finished(), s);
    }
  }
  const Summary summary = summarize(draws, 2.0);
  EXPECT_TRUE(std::isnan(summary.row("a").rhat));
  EXPECT_TRUE(std::isnan(summary.row("a").ess));
  EXPECT_EQ(format_diagnostic(summary.row("a").rhat), "n/a");
  EXPECT_EQ(summary.total_evals, 300);
  const SummaryRow& b = summary.row("b");
  EXPECT_NEAR(b.ess_per_eval, b.ess / 300.0, 1e-15);
  EXPECT_NEAR(b.time_per_ess, 2.0 / b.ess, 1e-15);
  EXPECT_NEAR(b.mcse, b.sd / std::sqrt(b.ess), 1e-15);
  EXPECT_THROW(summary.row("c"), std::out_of_range);

  std::ostringstream a, b2;
  write_summary_csv(a, summary);
  write_summary_csv(b2, summarize(draws, 2.0));
  EXPECT_EQ(a.str(), b2.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "name,mean,sd,q5,q50,q95,ess,rhat,mcse,time_per_ess,ess_per_eval");
}

TEST(Curvature, IsotropicGaussian) {
  const GaussianModel m = GaussianModel::standard(2);
  CurvatureSlice slice{Vec::Zero(2), 0, 1, {-1.0, 0.0, 1.0}, {0.0, 2.0}};
  const auto field = curvature_field(m, slice);
  ASSERT_EQ(field.size(), 6u);
  for (const auto& p : field) {
    EXPECT_NEAR(p.magnitude1, 1.0, 1e-12);
    EXPECT_NEAR(p.magnitude2, 1.0, 1e-12);
  }
}

TEST(Curvature, AnisotropicGaussian) {
  const GaussianModel m(Vec::Zero(2), SymMatrix::diagonal((Vec(2) << 4.0, 1.0).finished()));
  CurvatureSlice slice{Vec::Zero(2), 0, 1, {0.0}, {0.0}};
  const CurvaturePoint p = curvature_field(m, slice).front();
  EXPECT_NEAR(p.magnitude1 / p.magnitude2, 2.0, 1e-12);
  EXPECT_NEAR(std::abs(p.vec1y), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(p.vec2x), 1.0, 1e-12);
}

TEST(Curvature, FunnelNeckSharpens) {
  const FunnelModel m(25);
  CurvatureSlice slice;
  slice.base = Vec::Zero(26);
  slice.x_index = 0;
  slice.y_index = 25;
  slice.xs = {0.0};
  slice.ys = {1.0, 0.0, -2.0, -4.0, -6.0};
  const auto field = curvature_field(m, slice);
  for (std::size_t i = 1; i < field.size(); ++i) {
    EXPECT_GT(field[i].magnitude1 / field[i].magnitude2, field[i - 1].magnitude1 / field[i - 1].magnitude2);
  }
  std::ostringstream out;
  write_curvature_csv(out, field);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "x,y,eval1,evec1x,evec1y,eval2,evec2x,evec2y");
}
