#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lgas/lattice.hpp"

namespace lgas {

/// Exact computations over the full state space {0,1}^L.
///
/// States are indexed by their occupancy mask: state s has eta(x) = bit x of s.
namespace oracle {

inline constexpr int kGeneratorCap = 16;
inline constexpr int kStationaryCap = 12;
inline constexpr int kOperatorCap = 8;

/// Q(s, s') = total rate of the events mapping s to s'; Q(s, s) = -q(s).
Eigen::MatrixXd build_generator(const RateModel& model, int cap = kGeneratorCap);

/// Jump-chain transition matrix P(s, s') = rate / q(s). Throws
/// AbsorbingStateError if some q(s) = 0.
Eigen::MatrixXd jump_chain_matrix(const RateModel& model, int cap = kGeneratorCap);

/// Solves pi Q = 0, sum(pi) = 1, by replacing the last equation of Q^T pi = 0
/// with the normalisation. Throws ReducibleModelError when that system is
/// singular.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& generator);

/// max-norm of pi Q.
double stationary_residual(const Eigen::MatrixXd& generator, const Eigen::VectorXd& pi);

struct ExactSolution {
  Eigen::VectorXd pi;
  double rho = 0.0;
  double phi = 0.0;
  double tau = 0.0;
  double min_q = 0.0;
  double residual = 0.0;
};

/// Stationary rho, phi and tau = rho / phi. Throws NoInfluxError when phi = 0.
ExactSolution exact_law(const RateModel& model, int cap = kStationaryCap);

/// Sum over states of eta(x) pi(eta), for every site x.
Eigen::VectorXd site_marginals(int sites, const Eigen::VectorXd& pi);

struct ExtractionViolation {
  SiteSet sites;
  Configuration state;
  double rate;
  double expected;
};

struct DiffusionViolation {
  int x;
  int y;
  Configuration state;
  double forward_flux;  // d_{x,y}(eta) pi(eta)
  double reverse_flux;  // d_{y,x}(eta^{x,y}) pi(eta^{x,y})
};

struct Tolerance {
  double relative = 1e-9;
  double absolute = 1e-12;

  bool close(double a, double b) const;
};

struct ReversibilityReport {
  bool reversible = true;
  std::vector<ExtractionViolation> extraction_violations;
  std::vector<DiffusionViolation> diffusion_violations;
  Tolerance tolerance;
};

/// Checks the Glauber condition on extraction (singletons balance injection,
/// larger sets never fire) and the Kawasaki condition on diffusion for every
/// state, against the given distribution. Both compare probability fluxes,
/// rate * pi, under `tolerance`.
ReversibilityReport detailed_balance_check(const RateModel& model, const Eigen::VectorXd& pi,
                                           const Tolerance& tolerance = {});

/// Operator on functions of (site, state) that propagates a tagged particle
/// through one jump-chain step. Row index is x * 2^L + s.
Eigen::MatrixXd survival_operator(const RateModel& model, int cap = kOperatorCap);

/// Largest eigenvalue modulus of survival_operator(model).
double w_spectral_radius(const RateModel& model, int cap = kOperatorCap);

}  // namespace oracle
}  // namespace lgas
