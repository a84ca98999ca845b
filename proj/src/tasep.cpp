#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "lgas/errors.hpp"
#include "lgas/models.hpp"

namespace lgas {

void TasepParams::validate() const {
  if (L < 2) throw ContractError("tasep: L must be at least 2, got " + std::to_string(L));
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ContractError("tasep: alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ContractError("tasep: beta must be positive");
}

TasepModel::TasepModel(const TasepParams& params)
    : params_((params.validate(), params)), lattice_(params.L, Topology::path) {
  for (int x = 0; x + 1 < params.L; ++x) pairs_.emplace_back(x, x + 1);
  exits_.push_back(SiteSet::single(params.L - 1));
}

double TasepModel::injection_rate(const Configuration& eta, int x) const {
  return (x == 0 && !eta[0]) ? params_.alpha : 0.0;
}

double TasepModel::diffusion_rate(const Configuration& eta, int x, int y) const {
  return (y == x + 1 && eta[x] && !eta[y]) ? 1.0 : 0.0;
}

double TasepModel::extraction_rate(const Configuration& eta, SiteSet v) const {
  const int last = params_.L - 1;
  return (v == SiteSet::single(last) && eta[last]) ? params_.beta : 0.0;
}

TasepModel tasep_model(const TasepParams& params) { return TasepModel(params); }

unsigned __int128 tasep_B_exact(int x, int k) {
  if (k < 1 || k > x) throw ContractError("tasep_B: need 1 <= k <= x");
  if (x > 60) throw ContractError("tasep_B_exact: x must be at most 60");
  // B_{x,k} = (k / x) * C(2x-k-1, x-1); every partial product below is an integer.
  const int n = 2 * x - k - 1;
  const int r = x - 1;
  unsigned __int128 c = 1;
  for (int i = 1; i <= r; ++i) c = c * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
  return c * static_cast<unsigned>(k) / static_cast<unsigned>(x);
}

namespace {

std::vector<long double> log_factorials(int n) {
  std::vector<long double> lf(static_cast<std::size_t>(n) + 1, 0.0L);
  for (int i = 2; i <= n; ++i) lf[static_cast<std::size_t>(i)] = lf[static_cast<std::size_t>(i) - 1] + std::log(static_cast<long double>(i));
  return lf;
}

// Pairwise sum of exp(v - shift) over a span.
long double pairwise_exp_sum(std::span<const long double> v, long double shift) {
  if (v.size() <= 8) {
    long double s = 0.0L;
    for (long double x : v) s += std::exp(x - shift);
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_exp_sum(v.first(half), shift) + pairwise_exp_sum(v.subspan(half), shift);
}

long double log_sum_exp(std::span<const long double> v) {
  if (v.empty()) return -INFINITY;
  const long double top = *std::max_element(v.begin(), v.end());
  return top + std::log(pairwise_exp_sum(v, top));
}

int checked_size(int n) {
  if (n > kTasepMaxClosedFormL) {
    throw CapExceededError("tasep closed forms support L up to " + std::to_string(kTasepMaxClosedFormL));
  }
  return n;
}

// Shared tables for one (alpha, beta) up to size n.
class TasepTables {
 public:
  TasepTables(const TasepParams& params, int n)
      : log_alpha_(std::log(static_cast<long double>(params.alpha))),
        log_beta_(std::log(static_cast<long double>(params.beta))),
        lf_(log_factorials(2 * checked_size(n) + 1)) {
    // log S_k, S_k = sum_{l=0}^k alpha^-l beta^-(k-l) = S_{k-1} / beta + alpha^-k
    log_s_.assign(static_cast<std::size_t>(n) + 1, 0.0L);
    for (int k = 1; k <= n; ++k) {
      const long double a = log_s_[static_cast<std::size_t>(k) - 1] - log_beta_;
      const long double b = -k * log_alpha_;
      log_s_[static_cast<std::size_t>(k)] = std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
    }
    std::vector<long double> terms;
    partition_.log_z.assign(static_cast<std::size_t>(n) + 1, 0.0L);
    for (int x = 1; x <= n; ++x) {
      terms.clear();
      for (int k = 1; k <= x; ++k) terms.push_back(log_b(x, k) + log_s_[static_cast<std::size_t>(k)]);
      partition_.log_z[static_cast<std::size_t>(x)] = log_sum_exp(terms);
    }
  }

  long double log_b(int x, int k) const {
    return std::log(static_cast<long double>(k)) + lf_[static_cast<std::size_t>(2 * x - k - 1)] -
           lf_[static_cast<std::size_t>(x)] - lf_[static_cast<std::size_t>(x - k)];
  }
  long double log_z(int x) const { return partition_.log_z[static_cast<std::size_t>(x)]; }
  long double log_beta() const { return log_beta_; }
  const TasepPartition& partition() const { return partition_; }

 private:
  long double log_alpha_;
  long double log_beta_;
  std::vector<long double> lf_;
  std::vector<long double> log_s_;
  TasepPartition partition_;
};

std::vector<double> density_from(const TasepTables& t, int L) {
  std::vector<double> density(static_cast<std::size_t>(L));
  std::vector<long double> terms;
  // Sites are 1-based in the closed form; entry x-1 holds site x.
  for (int x = 1; x < L; ++x) {
    terms.clear();
    for (int k = 1; k <= L - x; ++k) {
      terms.push_back(t.log_z(L - k) + t.log_b(k, 1));
      terms.push_back(t.log_z(x - 1) + t.log_b(L - x, k) - (k + 1) * t.log_beta());
    }
    density[static_cast<std::size_t>(x - 1)] = static_cast<double>(std::exp(log_sum_exp(terms) - t.log_z(L)));
  }
  density[static_cast<std::size_t>(L - 1)] = static_cast<double>(std::exp(t.log_z(L - 1) - t.log_beta() - t.log_z(L)));
  return density;
}

double tau_from(const TasepTables& t, int L) {
  std::vector<long double> terms;
  for (int x = 1; x <= L - 1; ++x) {
    terms.push_back(std::log(static_cast<long double>(L - x)) + t.log_z(L - x) + t.log_b(x, 1));
    for (int k = 1; k <= L - x; ++k) {
      terms.push_back(t.log_z(x - 1) + t.log_b(L - x, k) - (k + 1) * t.log_beta());
    }
  }
  const long double rest = std::exp(log_sum_exp(terms) - t.log_z(L - 1));
  return static_cast<double>(std::exp(-t.log_beta()) + rest);
}

}  // namespace

long double tasep_log_B(int x, int k) {
  if (k < 1 || k > x) throw ContractError("tasep_B: need 1 <= k <= x");
  const auto lf = log_factorials(2 * x);
  return std::log(static_cast<long double>(k)) + lf[static_cast<std::size_t>(2 * x - k - 1)] -
         lf[static_cast<std::size_t>(x)] - lf[static_cast<std::size_t>(x - k)];
}

long double tasep_B(int x, int k) {
  if (x <= 60) return static_cast<long double>(tasep_B_exact(x, k));
  return std::exp(tasep_log_B(x, k));
}

TasepPartition tasep_Z(const TasepParams& params, int up_to) {
  if (up_to < 0) throw ContractError("tasep_Z: up_to must be nonnegative");
  TasepParams rates = params;
  rates.L = 2;  // only alpha and beta matter here
  rates.validate();
  return TasepTables(params, up_to).partition();
}

std::vector<double> tasep_density(const TasepParams& params) {
  params.validate();
  return density_from(TasepTables(params, params.L), params.L);
}

double tasep_tau_exact(const TasepParams& params) {
  params.validate();
  return tau_from(TasepTables(params, params.L), params.L);
}

double tasep_r_coefficient(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ContractError("tasep_r_coefficient: alpha and beta must be positive");
  if (alpha >= 0.5 && beta >= 0.5) return 2.0;
  if (alpha == beta) return 1.0 / (2.0 * alpha * (1.0 - alpha));
  if (alpha < beta) return 1.0 / (1.0 - alpha);
  return 1.0 / beta;
}

TasepExact tasep_exact(const TasepParams& params) {
  params.validate();
  const TasepTables tables(params, params.L);
  TasepExact out;
  out.z = tables.partition();
  out.density = density_from(tables, params.L);
  out.tau = tau_from(tables, params.L);
  out.r_coeff = tasep_r_coefficient(params.alpha, params.beta);
  return out;
}

}  // namespace lgas
