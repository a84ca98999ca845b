#include "lgas/workflows.hpp"

#include <cmath>
#include <limits>

#include "lgas/models.hpp"
#include "lgas/oracle.hpp"
#include "lgas/simulator.hpp"
#include "lgas/tracker.hpp"

namespace lgas {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Largest lattice for which exact reports include the survival-operator radius.
constexpr int kRadiusMaxL = 6;

std::vector<std::string> param_columns(ModelKind kind) {
  switch (kind) {
    case ModelKind::tasep: return {"alpha", "beta"};
    case ModelKind::ising: return {"V", "mu", "alpha00", "alpha10", "alpha01", "alpha11", "kawasaki_scale"};
    case ModelKind::custom: return {};
  }
  return {};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void put_params(Report& report, std::size_t row, const RunConfig& c) {
  report.set(row, "mode", to_string(c.mode));
  report.set(row, "model", to_string(c.model));
  switch (c.model) {
    case ModelKind::tasep:
      report.set(row, "alpha", c.tasep.alpha);
      report.set(row, "beta", c.tasep.beta);
      break;
    case ModelKind::ising:
      report.set(row, "V", c.ising.V);
      report.set(row, "mu", c.ising.mu);
      report.set(row, "alpha00", c.ising.alpha00);
      report.set(row, "alpha10", c.ising.alpha10);
      report.set(row, "alpha01", c.ising.alpha01);
      report.set(row, "alpha11", c.ising.alpha11);
      report.set(row, "kawasaki_scale", c.ising.kawasaki_scale);
      break;
    case ModelKind::custom: break;
  }
}

std::int64_t as_int(int v) { return v; }

void require_valid(const RateModel& model) {
  const ValidationReport v = validate_model(model);
  std::string why;
  if (!v.violations.empty()) {
    const auto& first = v.violations.front();
    why = "rate constraint violated: " + to_string(first.event) + " in " + first.state.to_string() + " (" + first.reason + ")";
  } else if (!v.absorbing_states.empty()) {
    why = "absorbing configuration " + v.absorbing_states.front().to_string();
  } else if (v.irreducible.has_value() && !*v.irreducible) {
    why = "the jump chain is not irreducible";
  }
  if (!why.empty()) throw InvalidModelError(why);
}

double closed_form_tau(const RunConfig& c) {
  switch (c.model) {
    case ModelKind::tasep: return tasep_tau_exact(c.tasep);
    case ModelKind::ising: return ising_tau_exact(c.ising).tau;
    case ModelKind::custom: break;
  }
  return kNaN;
}

struct Simulated {
  Estimates estimates;
  std::uint64_t count_violations = 0;
};

Simulated simulate(const RateModel& model, const RunConfig& c) {
  RunControl control;
  if (c.max_jumps) control.stop = MaxJumps{*c.max_jumps};
  else control.stop = MaxTime{*c.max_time};
  control.drain = c.drain;
  control.jump_budget = c.jump_budget;
  control.seed = c.seed;
  control.initial = c.initial.empty() ? Configuration::empty(model.lattice().size()) : Configuration::parse(c.initial);

  const auto runs = run_ensemble<ResidenceTracker>(model, control, c.replicas,
                                                   [&](std::size_t) { return ResidenceTracker(control.initial); });
  std::vector<Estimates> parts;
  Simulated out;
  for (const auto& r : runs) {
    parts.push_back(r.observer.estimates());
    out.count_violations += r.observer.count_violations();
  }
  out.estimates = merge_estimates(parts);
  return out;
}

void put_simulated(Report& report, std::size_t row, const RunConfig& c, const Simulated& s) {
  const Estimates& e = s.estimates;
  report.set(row, "rho_hat", e.rho_hat);
  report.set(row, "phi_hat", e.phi_hat);
  report.set(row, "tau_hat", e.tau_hat);
  report.set(row, "stderr_rho", e.stderr_rho);
  report.set(row, "stderr_phi", e.stderr_phi);
  report.set(row, "stderr_tau", e.stderr_tau);
  report.set(row, "t", e.t);
  report.set(row, "n_injected", e.n_injected);
  report.set(row, "n_completed", e.n_completed);
  report.set(row, "n_jumps", e.n_jumps);
  report.set(row, "replicas", c.replicas);
  report.set(row, "seed", c.seed);
  report.set(row, "count_violations", s.count_violations);
}

void put_exact(Report& report, std::size_t row, const RunConfig& c, const RateModel& model,
               const oracle::ExactSolution& exact) {
  report.set(row, "rho", exact.rho);
  report.set(row, "phi", exact.phi);
  report.set(row, "tau", exact.tau);
  report.set(row, "tau_closed", closed_form_tau(c));
  report.set(row, "min_q", exact.min_q);
  report.set(row, "residual", exact.residual);
  report.set(row, "reversible", oracle::detailed_balance_check(model, exact.pi).reversible);
  if (c.lattice_size() <= kRadiusMaxL) report.set(row, "w_radius", oracle::w_spectral_radius(model));
}

Outcome law_modes(const RunConfig& c) {
  const auto model = make_model(c);
  require_valid(*model);
  Outcome out{Report(report_columns(c))};
  Report& r = out.report;
  r.add({{"L", as_int(c.lattice_size())}});
  put_params(r, 0, c);

  if (c.mode != Mode::simulate) put_exact(r, 0, c, *model, oracle::exact_law(*model));
  if (c.mode != Mode::exact) put_simulated(r, 0, c, simulate(*model, c));
  if (c.mode == Mode::verify_law) {
    const double tau = std::get<double>(r.at(0, "tau"));
    const double tau_hat = std::get<double>(r.at(0, "tau_hat"));
    const double se = std::get<double>(r.at(0, "stderr_tau"));
    out.passed = std::abs(tau_hat - tau) <= 3.0 * se;
    r.set(0, "z_tau", se > 0.0 ? (tau_hat - tau) / se : kNaN);
    r.set(0, "verdict", std::string(out.passed ? "pass" : "fail"));
  }
  return out;
}

Outcome profile(const RunConfig& c) {
  Outcome out{Report(report_columns(c))};
  const std::vector<double> density = tasep_density(c.tasep);
  Eigen::VectorXd marginals;
  if (c.tasep.L <= oracle::kStationaryCap) {
    const TasepModel model(c.tasep);
    marginals = oracle::site_marginals(c.tasep.L, oracle::exact_law(model).pi);
  }
  for (int x = 0; x < c.tasep.L; ++x) {
    out.report.add({{"L", as_int(c.tasep.L)}, {"site", as_int(x)}, {"density", density[static_cast<std::size_t>(x)]}});
    put_params(out.report, static_cast<std::size_t>(x), c);
    if (marginals.size() > 0) out.report.set(static_cast<std::size_t>(x), "density_oracle", marginals(x));
  }
  return out;
}

Outcome ising_tau(const RunConfig& c) {
  Outcome out{Report(report_columns(c))};
  const auto s = ising_tau_exact(c.ising);
  out.report.add({{"L", as_int(c.ising.L)},
                  {"t_plus", s.t_plus},
                  {"t_minus", s.t_minus},
                  {"r_plus", s.r_plus},
                  {"r_minus", s.r_minus},
                  {"a_plus", s.a_plus},
                  {"a_minus", s.a_minus},
                  {"tau", s.tau}});
  put_params(out.report, 0, c);
  if (c.ising.L <= oracle::kStationaryCap) {
    const IsingModel model(c.ising);
    out.report.set(0, "tau_oracle", oracle::exact_law(model).tau);
  }
  return out;
}

Outcome scan(const RunConfig& c) {
  Outcome out{Report(report_columns(c))};
  const double r = tasep_r_coefficient(c.tasep.alpha, c.tasep.beta);
  for (std::size_t k = 0; k < c.L_grid.size(); ++k) {
    TasepParams p = c.tasep;
    p.L = c.L_grid[k];
    const double tau = tasep_tau_exact(p);
    const double per_site = tau / p.L;
    out.report.add({{"L", as_int(p.L)},
                    {"tau", tau},
                    {"tau_over_L", per_site},
                    {"r_coeff", r},
                    {"scaled_gap", std::abs(per_site - r) * std::sqrt(static_cast<double>(p.L))}});
    put_params(out.report, k, c);
  }
  return out;
}

}  // namespace

std::vector<std::string> report_columns(const RunConfig& c) {
  const std::vector<std::string> head = concat({"mode", "model", "L"}, param_columns(c.model));
  switch (c.mode) {
    case Mode::simulate:
    case Mode::exact:
    case Mode::verify_law:
      return concat(head, {"rho", "phi", "tau", "tau_closed", "rho_hat", "phi_hat", "tau_hat", "stderr_rho",
                           "stderr_phi", "stderr_tau", "z_tau", "t", "n_injected", "n_completed", "n_jumps",
                           "replicas", "seed", "verdict", "min_q", "residual", "reversible", "w_radius",
                           "count_violations"});
    case Mode::profile: return concat(head, {"site", "density", "density_oracle"});
    case Mode::ising_tau:
      return concat(head, {"t_plus", "t_minus", "r_plus", "r_minus", "a_plus", "a_minus", "tau", "tau_oracle"});
    case Mode::scan: return concat(head, {"tau", "tau_over_L", "r_coeff", "scaled_gap"});
  }
  return head;
}

Outcome run_workflow(const RunConfig& config) {
  switch (config.mode) {
    case Mode::simulate:
    case Mode::exact:
    case Mode::verify_law: return law_modes(config);
    case Mode::profile: return profile(config);
    case Mode::ising_tau: return ising_tau(config);
    case Mode::scan: return scan(config);
  }
  return {};
}

}  // namespace lgas
