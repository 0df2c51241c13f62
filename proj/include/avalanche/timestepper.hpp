#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "avalanche/mesh.hpp"
#include "avalanche/physics.hpp"
#include "avalanche/reconstruction.hpp"
#include "avalanche/scenarios.hpp"

namespace avalanche {

struct StepConfig {
  double cr = 0.5;  // Courant number, 0 < cr <= 1
  double t_end = 1.0;
  std::size_t max_steps = 10'000'000;
  double dt_floor = 1e-9;

  void validate() const;
};

/// Cell averages aligned with the mesh cells.
struct SolutionField {
  std::vector<State> cells;
  double t = 0.0;
  std::size_t step = 0;
};

SolutionField initial_field(const TriMesh& mesh, const ScenarioSpec& scenario);

double total_mass(const TriMesh& mesh, std::span<const State> cells);

/// Inclination and topography slope sampled at each barycenter.
struct CellForcing {
  double zeta = 0.0;
  double dzeta_dx = 0.0;
  Vec2 grad_zb;
};

std::vector<CellForcing> sample_forcing(const TriMesh& mesh, const ScenarioSpec& scenario);

/// Earth pressure branch of one cell: bit 0 set for passive x, bit 1 for
/// passive y.
using PressureBranch = std::uint8_t;

struct CellCoefficients {
  std::vector<BetaPair> beta;
  std::vector<PressureBranch> branch;
};

/// Per-cell beta frozen for one step. Velocity gradient signs come from ENO
/// gradients of u and v; a gradient whose change across the cell is below
/// u_reg counts as zero and so selects the active branch.
CellCoefficients cell_coefficients(const TriMesh& mesh, std::span<const State> cells,
                                   std::span<const CellForcing> forcing,
                                   const MaterialParams& params);

/// Courant-limited step, clipped so that t + dt <= t_end. Returns dt_floor
/// when no cell carries a wave. Throws SolverError if the limit collapses
/// below dt_floor.
double cfl_dt(const TriMesh& mesh, std::span<const State> cells, std::span<const BetaPair> beta,
              const MaterialParams& params, const StepConfig& config, double t);

struct StageResult {
  std::vector<State> cells;
  std::size_t clamps = 0;
  double boundary_mass_flux = 0.0;  // outward mass through the boundary over dt
};

/// Half step with the physical flux of each cell's own edge traces.
StageResult predictor(const TriMesh& mesh, std::span<const State> cells,
                      std::span<const CellGradient> gradients, std::span<const BetaPair> beta,
                      std::span<const CellForcing> forcing, const MaterialParams& params, double dt);

/// Full step with HLL fluxes between half-step traces.
StageResult corrector(const TriMesh& mesh, std::span<const State> cells,
                      std::span<const State> half, std::span<const CellGradient> gradients,
                      std::span<const BetaPair> beta, std::span<const CellForcing> forcing,
                      const ScenarioSpec& scenario, double dt);

struct StepRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double max_velocity = 0.0;
  double max_wave_speed = 0.0;
  std::size_t clamps = 0;
  double boundary_mass_flux = 0.0;
  std::size_t pressure_switches = 0;
  double min_depth = 0.0;
};

/// One line: step t dt mass max_wave_speed clamps (9 significant digits).
std::string format_record(const StepRecord& r);

/// Advances a field with the predictor-corrector scheme.
class Stepper {
 public:
  Stepper(ScenarioSpec scenario, StepConfig config);

  const ScenarioSpec& scenario() const { return scenario_; }
  const StepConfig& config() const { return config_; }

  /// One step, never past min(t_stop, config.t_end).
  StepRecord step(const TriMesh& mesh, SolutionField& field, double t_stop);
  StepRecord step(const TriMesh& mesh, SolutionField& field) {
    return step(mesh, field, config_.t_end);
  }

  /// Forget the previous pressure branches, e.g. after the mesh changed.
  void reset_branches() { previous_branch_.clear(); }

 private:
  ScenarioSpec scenario_;
  StepConfig config_;
  std::vector<PressureBranch> previous_branch_;
};

}  // namespace avalanche
