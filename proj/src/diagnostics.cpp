#include "hierhmc/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace hierhmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t check_chains(const ChainSamples& chains, const char* what) {
  if (chains.empty()) throw std::invalid_argument(std::string(what) + ": no chains");
  const std::size_t n = chains.front().size();
  for (const auto& c : chains) {
    if (c.size() != n) throw std::invalid_argument(std::string(what) + ": chains differ in length");
  }
  if (n < 4) throw std::invalid_argument(std::string(what) + ": at least 4 draws per chain required");
  return n;
}

double mean_of(const double* begin, std::size_t n) {
  return std::accumulate(begin, begin + n, 0.0) / static_cast<double>(n);
}

double variance_of(const double* begin, std::size_t n, double mean) {
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += (begin[i] - mean) * (begin[i] - mean);
  return ss / static_cast<double>(n - 1);
}

// Type-7 quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) return kNaN;
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double split_rhat(const ChainSamples& chains) {
  const std::size_t n = check_chains(chains, "split_rhat");
  const std::size_t half = n / 2;
  std::vector<double> means;
  std::vector<double> vars;
  for (const auto& c : chains) {
    for (const double* start : {c.data(), c.data() + (n - half)}) {
      const double m = mean_of(start, half);
      means.push_back(m);
      vars.push_back(variance_of(start, half, m));
    }
  }
  const double w = std::accumulate(vars.begin(), vars.end(), 0.0) / static_cast<double>(vars.size());
  if (!(w > 0.0) || !std::isfinite(w)) return kNaN;
  const double grand = mean_of(means.data(), means.size());
  const double b_over_n = variance_of(means.data(), means.size(), grand);
  const double nh = static_cast<double>(half);
  return std::sqrt((nh - 1.0) / nh + b_over_n / w);
}

std::vector<double> autocovariance(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const double m = mean_of(x.data(), n);
  std::size_t padded = 1;
  while (padded < 2 * n) padded <<= 1;

  std::vector<double> centered(padded, 0.0);
  for (std::size_t i = 0; i < n; ++i) centered[i] = x[i] - m;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, centered);
  for (auto& f : freq) f = std::complex<double>(std::norm(f), 0.0);
  std::vector<double> raw;
  fft.inv(raw, freq);

  std::vector<double> acov(n);
  for (std::size_t t = 0; t < n; ++t) acov[t] = raw[t] / static_cast<double>(n);
  return acov;
}

double ess(const ChainSamples& chains) {
  const std::size_t n = check_chains(chains, "ess");
  const std::size_t num_chains = chains.size();
  const double nd = static_cast<double>(n);

  std::vector<std::vector<double>> acovs;
  std::vector<double> chain_means;
  std::vector<double> chain_vars;
  for (const auto& c : chains) {
    acovs.push_back(autocovariance(c));
    chain_means.push_back(mean_of(c.data(), n));
    chain_vars.push_back(acovs.back()[0] * nd / (nd - 1.0));
  }
  const double mean_var = mean_of(chain_vars.data(), num_chains);
  double var_plus = mean_var * (nd - 1.0) / nd;
  if (num_chains > 1) {
    var_plus += variance_of(chain_means.data(), num_chains, mean_of(chain_means.data(), num_chains));
  }
  if (!(var_plus > 0.0) || !std::isfinite(var_plus)) return kNaN;

  auto mean_acov = [&](std::size_t lag) {
    double s = 0.0;
    for (const auto& a : acovs) s += a[lag];
    return s / static_cast<double>(num_chains);
  };
  auto rho = [&](std::size_t lag) { return 1.0 - (mean_var - mean_acov(lag)) / var_plus; };

  std::vector<double> rho_hat(n, 0.0);
  rho_hat[0] = 1.0;
  double rho_even = 1.0;
  double rho_odd = rho(1);
  rho_hat[1] = rho_odd;

  // Initial positive sequence over lag pairs.
  std::size_t s = 1;
  while (s + 4 < n && rho_even + rho_odd > 0.0) {
    rho_even = rho(s + 1);
    rho_odd = rho(s + 2);
    if (rho_even + rho_odd >= 0.0) {
      rho_hat[s + 1] = rho_even;
      rho_hat[s + 2] = rho_odd;
    }
    s += 2;
  }
  const std::size_t max_s = s;
  if (rho_even > 0.0 && max_s + 1 < n) rho_hat[max_s + 1] = rho_even;

  // Initial monotone sequence.
  for (std::size_t t = 1; t + 3 <= max_s; t += 2) {
    if (rho_hat[t + 1] + rho_hat[t + 2] > rho_hat[t - 1] + rho_hat[t]) {
      rho_hat[t + 1] = 0.5 * (rho_hat[t - 1] + rho_hat[t]);
      rho_hat[t + 2] = rho_hat[t + 1];
    }
  }

  double sum = 0.0;
  for (std::size_t t = 0; t <= max_s && t < n; ++t) sum += rho_hat[t];
  const double tail = max_s + 1 < n ? rho_hat[max_s + 1] : 0.0;
  const double tau = -1.0 + 2.0 * sum + tail;
  const double total = static_cast<double>(num_chains) * nd;
  if (!(tau > 0.0)) return total;
  return std::min(total / tau, total);
}

SummaryRow summarize_parameter(const std::string& name, const ChainSamples& chains) {
  SummaryRow row;
  row.name = name;
  std::vector<double> pooled;
  for (const auto& c : chains) pooled.insert(pooled.end(), c.begin(), c.end());
  if (pooled.empty()) {
    row.mean = row.sd = row.q05 = row.q50 = row.q95 = row.ess = row.rhat = row.mcse = kNaN;
    row.time_per_ess = row.ess_per_eval = kNaN;
    return row;
  }
  row.mean = mean_of(pooled.data(), pooled.size());
  row.sd = pooled.size() > 1 ? std::sqrt(variance_of(pooled.data(), pooled.size(), row.mean)) : 0.0;
  std::sort(pooled.begin(), pooled.end());
  row.q05 = quantile_sorted(pooled, 0.05);
  row.q50 = quantile_sorted(pooled, 0.50);
  row.q95 = quantile_sorted(pooled, 0.95);
  const bool enough = chains.front().size() >= 4;
  row.ess = enough ? ess(chains) : kNaN;
  row.rhat = enough ? split_rhat(chains) : kNaN;
  row.mcse = row.sd / std::sqrt(row.ess);
  return row;
}

const SummaryRow& Summary::row(std::string_view name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("summary has no parameter '" + std::string(name) + "'");
}

Summary summarize(const DrawMatrix& draws, double wall_time, long total_evals) {
  Summary summary;
  summary.chains = draws.chains();
  summary.draws_per_chain = draws.draws();
  summary.divergent = draws.divergent_count();
  summary.total_evals = total_evals > 0 ? total_evals : draws.total_evals();
  summary.wall_time = wall_time;
  summary.mean_accept_stat = draws.mean_accept_stat();
  for (std::size_t k = 0; k < draws.dim(); ++k) {
    SummaryRow row = summarize_parameter(draws.names()[k], draws.parameter(k));
    row.time_per_ess = wall_time / row.ess;
    row.ess_per_eval = summary.total_evals > 0 ? row.ess / static_cast<double>(summary.total_evals) : kNaN;
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

std::string format_diagnostic(double value, int precision) {
  if (std::isnan(value)) return "n/a";
  std::ostringstream out;
  out << std::setprecision(precision) << value;
  return out.str();
}

void print_summary(std::ostream& out, const Summary& summary) {
  std::size_t width = 4;
  for (const auto& r : summary.rows) width = std::max(width, r.name.size());
  const auto w = static_cast<int>(width) + 2;
  out << std::left << std::setw(w) << "name" << std::right;
  for (const char* h : {"mean", "sd", "5%", "50%", "95%", "ess", "rhat", "mcse"}) out << std::setw(12) << h;
  out << '\n';
  for (const auto& r : summary.rows) {
    out << std::left << std::setw(w) << r.name << std::right;
    for (double v : {r.mean, r.sd, r.q05, r.q50, r.q95, r.ess, r.rhat, r.mcse}) {
      out << std::setw(12) << format_diagnostic(v, 5);
    }
    out << '\n';
  }
  out << summary.chains << " chains x " << summary.draws_per_chain << " draws; " << summary.divergent
      << " divergent; mean accept_stat " << format_diagnostic(summary.mean_accept_stat) << "; "
      << summary.total_evals << " evaluations; wall time " << format_diagnostic(summary.wall_time) << " s\n";
}

void write_summary_csv(std::ostream& out, const Summary& summary) {
  out << "name,mean,sd,q5,q50,q95,ess,rhat,mcse,time_per_ess,ess_per_eval\n";
  out << std::setprecision(17);
  auto field = [&](double v) {
    if (!std::isnan(v)) out << v;
  };
  for (const auto& r : summary.rows) {
    out << r.name;
    for (double v : {r.mean, r.sd, r.q05, r.q50, r.q95, r.ess, r.rhat, r.mcse, r.time_per_ess, r.ess_per_eval}) {
      out << ',';
      field(v);
    }
    out << '\n';
  }
}

std::vector<CurvaturePoint> curvature_field(const TargetModel& model, const CurvatureSlice& slice) {
  if (slice.base.size() != model.dim()) throw std::invalid_argument("curvature_field: base point dimension");
  if (slice.x_index == slice.y_index || slice.x_index < 0 || slice.y_index < 0 ||
      slice.x_index >= model.dim() || slice.y_index >= model.dim()) {
    throw std::invalid_argument("curvature_field: invalid slice coordinates");
  }
  std::vector<CurvaturePoint> out;
  out.reserve(slice.xs.size() * slice.ys.size());
  Vec q = slice.base;
  for (double y : slice.ys) {
    for (double x : slice.xs) {
      q(slice.x_index) = x;
      q(slice.y_index) = y;
      const SymMatrix h = model.hessian(q);
      SymMatrix block(2);
      block.set(0, 0, h(slice.x_index, slice.x_index));
      block.set(0, 1, h(slice.x_index, slice.y_index));
      block.set(1, 1, h(slice.y_index, slice.y_index));
      const EigenPair eig = eigh(block, "curvature field block");

      std::array<Eigen::Index, 2> order{0, 1};
      if (std::abs(eig.values(1)) > std::abs(eig.values(0))) std::swap(order[0], order[1]);
      CurvaturePoint p;
      p.x = x;
      p.y = y;
      p.magnitude1 = std::sqrt(std::abs(eig.values(order[0])));
      p.vec1x = eig.vectors(0, order[0]);
      p.vec1y = eig.vectors(1, order[0]);
      p.magnitude2 = std::sqrt(std::abs(eig.values(order[1])));
      p.vec2x = eig.vectors(0, order[1]);
      p.vec2y = eig.vectors(1, order[1]);
      out.push_back(p);
    }
  }
  return out;
}

void write_curvature_csv(std::ostream& out, const std::vector<CurvaturePoint>& points) {
  out << "x,y,eval1,evec1x,evec1y,eval2,evec2x,evec2y\n";
  out << std::setprecision(17);
  for (const auto& p : points) {
    out << p.x << ',' << p.y << ',' << p.magnitude1 << ',' << p.vec1x << ',' << p.vec1y << ','
        << p.magnitude2 << ',' << p.vec2x << ',' << p.vec2y << '\n';
  }
}

}  // namespace hierhmc
