#include "lgas/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "lgas/errors.hpp"

namespace lgas::oracle {

namespace {

std::size_t state_count(const RateModel& model, int cap, const char* what) {
  const int size = model.lattice().size();
  if (size > cap) {
    throw CapExceededError(std::string(what) + ": lattice size " + std::to_string(size) +
                           " exceeds the cap of " + std::to_string(cap));
  }
  return std::size_t{1} << size;
}

}  // namespace

Eigen::MatrixXd build_generator(const RateModel& model, int cap) {
  const std::size_t n = state_count(model, cap, "build_generator");
  const int size = model.lattice().size();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<RatedEvent> events;
  for (std::size_t s = 0; s < n; ++s) {
    const Configuration eta(size, s);
    enabled_events(model, eta, events);
    const auto row = static_cast<Eigen::Index>(s);
    for (const auto& [event, rate] : events) {
      const auto col = static_cast<Eigen::Index>(eta.flipped(flip_set(event)).bits());
      q(row, col) += rate;
      q(row, row) -= rate;
    }
  }
  return q;
}

Eigen::MatrixXd jump_chain_matrix(const RateModel& model, int cap) {
  Eigen::MatrixXd p = build_generator(model, cap);
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    const double q = -p(s, s);
    if (!(q > 0.0)) {
      throw AbsorbingStateError("absorbing configuration " +
                                Configuration(model.lattice().size(), static_cast<std::uint64_t>(s)).to_string());
    }
    p(s, s) = 0.0;
    p.row(s) /= q;
  }
  return p;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& generator) {
  const Eigen::Index n = generator.rows();
  Eigen::MatrixXd a = generator.transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd pi = lu.solve(b);
  // One step of iterative refinement.
  pi += lu.solve(b - a * pi);
  if (!pi.allFinite() || !(lu.rcond() >= 1e-14)) {
    throw ReducibleModelError("stationary system is singular; the model is not irreducible (run validate_model)");
  }
  return pi;
}

double stationary_residual(const Eigen::MatrixXd& generator, const Eigen::VectorXd& pi) {
  return (pi.transpose() * generator).cwiseAbs().maxCoeff();
}

Eigen::VectorXd site_marginals(int sites, const Eigen::VectorXd& pi) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(sites);
  for (Eigen::Index s = 0; s < pi.size(); ++s) {
    for (int x = 0; x < sites; ++x) {
      if ((static_cast<std::uint64_t>(s) >> x) & 1U) m(x) += pi(s);
    }
  }
  return m;
}

ExactSolution exact_law(const RateModel& model, int cap) {
  const Eigen::MatrixXd q = build_generator(model, cap);
  ExactSolution out;
  out.pi = stationary_distribution(q);
  out.residual = stationary_residual(q, out.pi);
  out.min_q = (-q.diagonal()).minCoeff();

  const int size = model.lattice().size();
  for (Eigen::Index s = 0; s < q.rows(); ++s) {
    const Configuration eta(size, static_cast<std::uint64_t>(s));
    out.rho += eta.particle_count() * out.pi(s);
    double influx = 0.0;
    for (int x = 0; x < size; ++x) influx += model.injection_rate(eta, x);
    out.phi += influx * out.pi(s);
  }
  if (!(out.phi > 0.0)) throw NoInfluxError("stationary influx is zero: the model admits no injections");
  out.tau = out.rho / out.phi;
  return out;
}

bool Tolerance::close(double a, double b) const {
  return std::abs(a - b) <= std::max(absolute, relative * std::max(std::abs(a), std::abs(b)));
}

ReversibilityReport detailed_balance_check(const RateModel& model, const Eigen::VectorXd& pi,
                                           const Tolerance& tolerance) {
  const int size = model.lattice().size();
  const std::size_t n = std::size_t{1} << size;
  if (static_cast<std::size_t>(pi.size()) != n) throw ContractError("distribution size does not match the state space");

  ReversibilityReport report;
  report.tolerance = tolerance;

  const auto candidates = model.extraction_candidates();
  auto extraction = [&](const Configuration& eta, SiteSet v) {
    const bool declared = std::find(candidates.begin(), candidates.end(), v) != candidates.end();
    return declared ? model.extraction_rate(eta, v) : 0.0;
  };
  const auto declared_pairs = model.diffusion_pairs();
  const std::set<SitePair> pairs(declared_pairs.begin(), declared_pairs.end());
  auto diffusion = [&](const Configuration& eta, int x, int y) {
    return pairs.contains({x, y}) ? model.diffusion_rate(eta, x, y) : 0.0;
  };

  for (std::size_t s = 0; s < n; ++s) {
    const Configuration eta(size, s);
    const double p = pi(static_cast<Eigen::Index>(s));

    for (int x = 0; x < size; ++x) {
      if (!eta[x]) continue;
      const SiteSet v = SiteSet::single(x);
      const Configuration emptied = eta.flipped(v);
      const double inflow = model.injection_rate(emptied, x) * pi(static_cast<Eigen::Index>(emptied.bits()));
      const double rate = extraction(eta, v);
      const double expected = p > 0.0 ? inflow / p : 0.0;
      // Compared as fluxes, like diffusion: a solved pi is accurate in absolute
      // terms only, so dividing by a tiny pi(eta) would amplify its error.
      if (!tolerance.close(rate * p, inflow)) report.extraction_violations.push_back({v, eta, rate, expected});
    }
    for (const SiteSet& v : candidates) {
      if (v.size() < 2 || !eta.filled(v)) continue;
      const double rate = model.extraction_rate(eta, v);
      if (!tolerance.close(rate, 0.0)) report.extraction_violations.push_back({v, eta, rate, 0.0});
    }

    for (int x = 0; x < size; ++x) {
      if (!eta[x]) continue;
      for (int y = 0; y < size; ++y) {
        if (y == x || eta[y]) continue;
        const Configuration swapped = eta.flipped(SiteSet::pair(x, y));
        const double forward = diffusion(eta, x, y) * p;
        const double reverse = diffusion(swapped, y, x) * pi(static_cast<Eigen::Index>(swapped.bits()));
        if (forward == 0.0 && reverse == 0.0) continue;
        if (!tolerance.close(forward, reverse)) report.diffusion_violations.push_back({x, y, eta, forward, reverse});
      }
    }
  }
  report.reversible = report.extraction_violations.empty() && report.diffusion_violations.empty();
  return report;
}

Eigen::MatrixXd survival_operator(const RateModel& model, int cap) {
  const std::size_t n = state_count(model, cap, "survival_operator");
  const int size = model.lattice().size();
  const auto dim = static_cast<Eigen::Index>(n * static_cast<std::size_t>(size));
  const auto index = [n](int x, std::uint64_t s) {
    return static_cast<Eigen::Index>(static_cast<std::size_t>(x) * n + s);
  };

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<RatedEvent> events;
  for (std::size_t s = 0; s < n; ++s) {
    const Configuration eta(size, s);
    const double q = enabled_events(model, eta, events);
    if (!(q > 0.0)) throw AbsorbingStateError("absorbing configuration " + eta.to_string());
    for (const auto& [event, rate] : events) {
      const Configuration next = eta.flipped(flip_set(event));
      const double p = rate / q;
      for (int x = 0; x < size; ++x) {
        if (!eta[x]) continue;
        if (next[x]) {
          w(index(x, s), index(x, next.bits())) += p;
          continue;
        }
        for (int y = 0; y < size; ++y) {
          if (y != x && !eta[y] && next[y]) w(index(x, s), index(y, next.bits())) += p;
        }
      }
    }
  }
  return w;
}

double w_spectral_radius(const RateModel& model, int cap) {
  const Eigen::MatrixXd w = survival_operator(model, cap);
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(w, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation did not converge");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace lgas::oracle
