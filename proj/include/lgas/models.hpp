#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lgas/lattice.hpp"

namespace lgas {

// ---------------------------------------------------------------------------
// Ising ring with Glauber injection/extraction and Kawasaki diffusion
// ---------------------------------------------------------------------------

struct IsingParams {
  int L = 3;
  double V = 0.0;   // nearest-neighbour interaction
  double mu = 0.0;  // chemical potential
  // Injection parameters alpha_{left,right}, indexed by the neighbour occupancies.
  double alpha00 = 1.0;
  double alpha10 = 1.0;
  double alpha01 = 1.0;
  double alpha11 = 1.0;
  double kawasaki_scale = 1.0;

  double alpha(int left, int right) const;
  /// Extraction parameter beta_{left,right} = alpha_{left,right} exp(V (left + right) - mu).
  double beta(int left, int right) const;
  /// Throws ContractError on L < 2 or non-positive alphas / scale.
  void validate() const;
};

/// H(eta) = V sum_x eta(x) eta(x+1) - mu sum_x eta(x), indices mod L.
double ising_hamiltonian(const IsingParams& params, const Configuration& eta);

class IsingModel final : public RateModel {
 public:
  explicit IsingModel(const IsingParams& params);

  const Lattice& lattice() const override { return lattice_; }
  double injection_rate(const Configuration& eta, int x) const override;
  /// Metropolis rule kawasaki_scale * min(1, exp(H(eta) - H(eta^{x,y}))) between ring neighbours.
  double diffusion_rate(const Configuration& eta, int x, int y) const override;
  double extraction_rate(const Configuration& eta, SiteSet v) const override;
  std::span<const SitePair> diffusion_pairs() const override { return pairs_; }
  std::span<const SiteSet> extraction_candidates() const override { return singletons_; }

  const IsingParams& params() const { return params_; }

 private:
  int left(int x) const { return (x + lattice_.size() - 1) % lattice_.size(); }
  int right(int x) const { return (x + 1) % lattice_.size(); }

  IsingParams params_;
  Lattice lattice_;
  std::vector<SitePair> pairs_;
  std::vector<SiteSet> singletons_;
};

IsingModel ising_model(const IsingParams& params);

template <typename Scalar = double>
struct TransferMatrixSolution {
  using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

  Matrix2 transfer;
  Scalar t_plus;
  Scalar t_minus;
  Matrix2 p_plus;  // spectral projections: T^n = t_+^n P_+ + t_-^n P_-
  Matrix2 p_minus;
  Scalar r_plus;   // (P_+)_{1,1}
  Scalar r_minus;
  Scalar a_plus;
  Scalar a_minus;
  Scalar tau;
};

/// Mean residence time of the Ising ring by the transfer-matrix method.
///
/// The ratio form tau = t_+^2 (r_+ + r_- s^L) / (a_+ + a_- s^(L-2)), with
/// s = t_- / t_+, keeps the evaluation finite for large L.
template <typename Scalar = double>
TransferMatrixSolution<Scalar> ising_tau_exact(const IsingParams& params) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  params.validate();
  const Scalar one(1);
  const Scalar V(params.V), mu(params.mu);
  const Scalar e_mu = exp(mu);
  const Scalar e_mu_v = exp(mu - V);
  const Scalar e_half = exp(mu / 2);

  TransferMatrixSolution<Scalar> s;
  s.transfer << one, e_half, e_half, e_mu_v;
  const Scalar disc = sqrt((one - e_mu_v) * (one - e_mu_v) + 4 * e_mu);
  s.t_plus = (one + e_mu_v + disc) / 2;
  s.t_minus = (one + e_mu_v - disc) / 2;

  const typename TransferMatrixSolution<Scalar>::Matrix2 id = TransferMatrixSolution<Scalar>::Matrix2::Identity();
  s.p_plus = (s.transfer - s.t_minus * id) / (s.t_plus - s.t_minus);
  s.p_minus = (s.transfer - s.t_plus * id) / (s.t_minus - s.t_plus);

  auto r_of = [&](Scalar t) { return (t - one) * (t - one) / ((t - one) * (t - one) + e_mu); };
  auto a_of = [&](Scalar t) {
    const Scalar u = t - one;
    return (Scalar(params.alpha00) + (Scalar(params.alpha10) + Scalar(params.alpha01)) * u + Scalar(params.alpha11) * u * u) /
           (one + exp(-mu) * u * u);
  };
  s.r_plus = r_of(s.t_plus);
  s.r_minus = r_of(s.t_minus);
  s.a_plus = a_of(s.t_plus);
  s.a_minus = a_of(s.t_minus);

  const Scalar ratio = s.t_minus / s.t_plus;
  const Scalar num = s.r_plus + s.r_minus * pow(ratio, params.L);
  const Scalar den = s.a_plus + s.a_minus * pow(ratio, params.L - 2);
  s.tau = s.t_plus * s.t_plus * num / den;
  return s;
}

// ---------------------------------------------------------------------------
// TASEP with open boundaries
// ---------------------------------------------------------------------------

/// Closed forms accept L up to this size.
inline constexpr int kTasepMaxClosedFormL = 20000;

struct TasepParams {
  int L = 2;
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
};

/// Sites 0..L-1: injection at 0 with rate alpha, hops x -> x+1 with rate 1,
/// extraction at L-1 with rate beta.
class TasepModel final : public RateModel {
 public:
  explicit TasepModel(const TasepParams& params);

  const Lattice& lattice() const override { return lattice_; }
  double injection_rate(const Configuration& eta, int x) const override;
  double diffusion_rate(const Configuration& eta, int x, int y) const override;
  double extraction_rate(const Configuration& eta, SiteSet v) const override;
  std::span<const SitePair> diffusion_pairs() const override { return pairs_; }
  std::span<const SiteSet> extraction_candidates() const override { return exits_; }

  const TasepParams& params() const { return params_; }

 private:
  TasepParams params_;
  Lattice lattice_;
  std::vector<SitePair> pairs_;
  std::vector<SiteSet> exits_;
};

TasepModel tasep_model(const TasepParams& params);

/// B_{x,k} = k (2x-k-1)! / (x! (x-k)!) exactly, for 1 <= k <= x <= 60.
unsigned __int128 tasep_B_exact(int x, int k);
/// log B_{x,k} for any 1 <= k <= x.
long double tasep_log_B(int x, int k);
/// B_{x,k}; exact below x = 61, from the logarithm beyond.
long double tasep_B(int x, int k);

/// Z_0..Z_n held as logarithms.
struct TasepPartition {
  std::vector<long double> log_z;

  int size() const { return static_cast<int>(log_z.size()); }
  /// Z_x itself; +inf once it exceeds the long double range.
  long double z(int x) const { return std::exp(log_z.at(static_cast<std::size_t>(x))); }
};

/// Z_x for x = 0..up_to under (alpha, beta) of `params` (params.L is not used).
TasepPartition tasep_Z(const TasepParams& params, int up_to);

/// Stationary occupation probability of each site 0..L-1.
std::vector<double> tasep_density(const TasepParams& params);

/// Exact mean residence time.
double tasep_tau_exact(const TasepParams& params);

/// Large-L limit of tau / L.
double tasep_r_coefficient(double alpha, double beta);

struct TasepExact {
  TasepPartition z;
  std::vector<double> density;
  double tau = 0.0;
  double r_coeff = 0.0;
};

TasepExact tasep_exact(const TasepParams& params);

}  // namespace lgas
