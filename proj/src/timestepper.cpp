#include "avalanche/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "avalanche/riemann.hpp"

namespace avalanche {

void StepConfig::validate() const {
  if (!(cr > 0.0 && cr <= 1.0)) throw ConfigError("Courant number must lie in (0, 1]");
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (!(dt_floor > 0.0)) throw ConfigError("dt_floor must be positive");
  if (max_steps == 0) throw ConfigError("max_steps must be positive");
}

SolutionField initial_field(const TriMesh& mesh, const ScenarioSpec& scenario) {
  SolutionField f;
  f.cells.reserve(mesh.num_cells());
  for (const Cell& c : mesh.cells()) f.cells.push_back(scenario.initial_state(c.barycenter));
  return f;
}

double total_mass(const TriMesh& mesh, std::span<const State> cells) {
  double m = 0.0;
  for (Index i = 0; i < mesh.num_cells(); ++i) m += cells[i].h * mesh.cell(i).area;
  return m;
}

std::vector<CellForcing> sample_forcing(const TriMesh& mesh, const ScenarioSpec& scenario) {
  std::vector<CellForcing> out(mesh.num_cells());
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const Vec2 x = mesh.cell(i).barycenter;
    const InclinationSample inc = scenario.inclination_at(x.x);
    out[i] = {inc.zeta, inc.dzeta_dx, scenario.topography_at(x).grad};
  }
  return out;
}

CellCoefficients cell_coefficients(const TriMesh& mesh, std::span<const State> cells,
                                   std::span<const CellForcing> forcing,
                                   const MaterialParams& params) {
  const Index n = mesh.num_cells();
  CellCoefficients out;
  out.beta.resize(n);
  out.branch.assign(n, 0);

  // K for the four (x, y) branch combinations.
  std::array<EarthPressure, 4> table;
  for (PressureBranch b = 0; b < 4; ++b) {
    table[b] = earth_pressure(params, (b & 1) ? -1.0 : 1.0, (b & 2) ? -1.0 : 1.0);
  }

  const bool mohr_coulomb = params.pressure == PressureMode::MohrCoulomb;
  std::vector<double> u, v;
  if (mohr_coulomb) {
    u.resize(n);
    v.resize(n);
    for (Index i = 0; i < n; ++i) {
      const PrimitiveState p = primitive_from_conserved(cells[i], params.h_dry);
      u[i] = p.u;
      v[i] = p.v;
    }
  }

  for (Index i = 0; i < n; ++i) {
    PressureBranch branch = 0;
    if (mohr_coulomb) {
      const double dx = mesh.cell(i).size;
      const double dudx = eno_gradient(mesh, i, u).x;
      const double dvdy = eno_gradient(mesh, i, v).y;
      if (dudx < 0.0 && -dudx * dx >= params.u_reg) branch |= 1;
      if (dvdy < 0.0 && -dvdy * dx >= params.u_reg) branch |= 2;
    }
    out.branch[i] = branch;
    out.beta[i] = beta(params, forcing[i].zeta, table[branch]);
  }
  return out;
}

double cfl_dt(const TriMesh& mesh, std::span<const State> cells, std::span<const BetaPair> beta,
              const MaterialParams& params, const StepConfig& config, double t) {
  double dt = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const PrimitiveState p = primitive_from_conserved(cells[i], params.h_dry);
    const double beta_norm = std::hypot(beta[i].bx, beta[i].by);
    const double speed = std::sqrt(beta_norm * std::max(0.0, p.h)) + std::hypot(p.u, p.v);
    if (speed > 0.0) dt = std::min(dt, mesh.cell(i).size / speed);
  }
  if (std::isfinite(dt)) {
    dt *= config.cr;
    if (dt < config.dt_floor) {
      std::ostringstream msg;
      msg << "time step " << dt << " fell below dt_floor " << config.dt_floor << " at t = " << t;
      throw SolverError(msg.str());
    }
  } else {
    dt = config.dt_floor;
  }
  return std::min(dt, std::max(0.0, config.t_end - t));
}

namespace {

// Negative depths are roundoff or overshoot; reset to a dry state.
bool clamp(State& s) {
  if (s.h >= 0.0) return false;
  s = State{};
  return true;
}

// Thin layers pick up momentum from pressure-dominated fluxes out of
// proportion to their mass. Desingularized velocity (Kurganov-Petrova), exact
// above h_thin.
void regularize(State& s, double h_thin) {
  if (s.h >= h_thin) return;
  const double h2 = s.h * s.h;
  const double t2 = h_thin * h_thin;
  const double factor = std::sqrt(2.0) * h2 / std::sqrt(h2 * h2 + std::max(h2 * h2, t2 * t2));
  s.hu *= factor;
  s.hv *= factor;
}

State source_vector(const State& U, const CellForcing& f, const MaterialParams& params) {
  const PrimitiveState p = primitive_from_conserved(U, params.h_dry);
  const SourceTerms s = source(p, f.zeta, f.dzeta_dx, f.grad_zb, params);
  return {0.0, U.h * s.sx, U.h * s.sy};
}

[[noreturn]] void non_finite(const char* stage, Index cell) {
  throw SolverError(std::string("non-finite state in ") + stage + " at cell " + std::to_string(cell));
}

}  // namespace

StageResult predictor(const TriMesh& mesh, std::span<const State> cells,
                      std::span<const CellGradient> gradients, std::span<const BetaPair> beta,
                      std::span<const CellForcing> forcing, const MaterialParams& params,
                      double dt) {
  StageResult out;
  out.cells.resize(mesh.num_cells());
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const Cell& c = mesh.cell(i);
    State flux_sum;
    for (int k : c.sum_order) {
      const Edge& e = mesh.edge(c.edges[k]);
      const State trace = evaluate_trace(cells[i], gradients[i], e.midpoint - c.barycenter);
      flux_sum += flux_normal(trace, beta[i], mesh.outward_normal(i, k), params.h_dry) * e.length;
    }
    State next = cells[i] - flux_sum * (0.5 * dt / c.area) +
                 source_vector(cells[i], forcing[i], params) * (0.5 * dt);
    if (!next.finite()) non_finite("predictor", i);
    if (clamp(next)) ++out.clamps;
    regularize(next, params.h_thin);
    out.cells[i] = next;
  }
  return out;
}

StageResult corrector(const TriMesh& mesh, std::span<const State> cells,
                      std::span<const State> half, std::span<const CellGradient> gradients,
                      std::span<const BetaPair> beta, std::span<const CellForcing> forcing,
                      const ScenarioSpec& scenario, double dt) {
  const MaterialParams& params = scenario.params;
  std::vector<State> edge_flux(mesh.num_edges());
  StageResult out;

  for (Index id = 0; id < mesh.num_edges(); ++id) {
    const Edge& e = mesh.edge(id);
    const Index l = e.left;
    RiemannStates rs;
    rs.n = e.normal;
    rs.h_dry = params.h_dry;
    rs.left = evaluate_trace(half[l], gradients[l], e.midpoint - mesh.cell(l).barycenter);
    rs.beta_left = beta[l];
    if (e.right) {
      const Index r = *e.right;
      rs.right = evaluate_trace(half[r], gradients[r], e.midpoint - mesh.cell(r).barycenter);
      rs.beta_right = beta[r];
    } else {
      rs.right = ghost_state(scenario.boundaries.rule_for(e.normal), rs.left, e.normal);
      rs.beta_right = beta[l];
    }

    try {
      edge_flux[id] = hll_flux(rs) * e.length;
    } catch (const SolverError& err) {
      throw SolverError(std::string(err.what()) + " at edge " + std::to_string(id));
    }
    if (!e.right) out.boundary_mass_flux += edge_flux[id].h * dt;
  }

  out.cells.resize(mesh.num_cells());
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const Cell& c = mesh.cell(i);
    State net;
    for (int k : c.sum_order) {
      const Index id = c.edges[k];
      if (mesh.edge(id).left == i) {
        net -= edge_flux[id];
      } else {
        net += edge_flux[id];
      }
    }
    State next = cells[i] + net * (dt / c.area) +
                 source_vector(half[i], forcing[i], params) * dt;
    if (!next.finite()) non_finite("corrector", i);
    if (clamp(next)) ++out.clamps;
    regularize(next, params.h_thin);
    out.cells[i] = next;
  }
  return out;
}

std::string format_record(const StepRecord& r) {
  std::ostringstream os;
  os << std::setprecision(9) << r.step << ' ' << r.t << ' ' << r.dt << ' ' << r.mass << ' '
     << r.max_wave_speed << ' ' << r.clamps;
  return os.str();
}

Stepper::Stepper(ScenarioSpec scenario, StepConfig config)
    : scenario_(std::move(scenario)), config_(config) {
  scenario_.validate();
  config_.validate();
}

StepRecord Stepper::step(const TriMesh& mesh, SolutionField& field, double t_stop) {
  const MaterialParams& params = scenario_.params;
  const std::vector<CellForcing> forcing = sample_forcing(mesh, scenario_);
  CellCoefficients coeff = cell_coefficients(mesh, field.cells, forcing, params);
  const std::vector<CellGradient> gradients = reconstruct(mesh, field.cells, params.h_thin);

  StepConfig limit = config_;
  limit.t_end = std::min(config_.t_end, t_stop);
  const double dt = cfl_dt(mesh, field.cells, coeff.beta, params, limit, field.t);

  StepRecord rec;
  if (previous_branch_.size() == coeff.branch.size()) {
    for (Index i = 0; i < coeff.branch.size(); ++i) {
      if (coeff.branch[i] != previous_branch_[i]) ++rec.pressure_switches;
    }
  }
  previous_branch_ = std::move(coeff.branch);

  const StageResult half = predictor(mesh, field.cells, gradients, coeff.beta, forcing, params, dt);
  StageResult full =
      corrector(mesh, field.cells, half.cells, gradients, coeff.beta, forcing, scenario_, dt);

  field.cells = std::move(full.cells);
  // Land exactly on the stop time when the step was clipped to it.
  field.t = dt >= limit.t_end - field.t ? limit.t_end : field.t + dt;
  ++field.step;

  rec.step = field.step;
  rec.t = field.t;
  rec.dt = dt;
  rec.clamps = half.clamps + full.clamps;
  rec.boundary_mass_flux = full.boundary_mass_flux;
  rec.mass = total_mass(mesh, field.cells);
  rec.min_depth = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const State& s = field.cells[i];
    const PrimitiveState p = primitive_from_conserved(s, params.h_dry);
    const double speed = std::hypot(p.u, p.v);
    const double c = std::sqrt(std::hypot(coeff.beta[i].bx, coeff.beta[i].by) * p.h);
    rec.max_velocity = std::max(rec.max_velocity, speed);
    rec.max_wave_speed = std::max(rec.max_wave_speed, speed + c);
    rec.min_depth = std::min(rec.min_depth, std::min(s.h, half.cells[i].h));
  }
  return rec;
}

}  // namespace avalanche
