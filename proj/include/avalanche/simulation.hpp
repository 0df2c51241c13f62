#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "avalanche/adaptivity.hpp"
#include "avalanche/scenarios.hpp"
#include "avalanche/timestepper.hpp"

namespace avalanche {

struct SimulationOptions {
  StepConfig step;
  bool adapt = false;
  AdaptConfig adapt_config;
};

/// Owns mesh, field and stepper for one run. With adaptivity the mesh is
/// refined towards the initial data before the first step and adapted every
/// adapt_interval steps afterwards.
class Simulation {
 public:
  Simulation(ScenarioSpec scenario, const TriMesh& mesh, SimulationOptions options);

  const TriMesh& mesh() const { return adaptive_ ? adaptive_->mesh() : mesh_; }
  const SolutionField& field() const { return field_; }
  const ScenarioSpec& scenario() const { return stepper_.scenario(); }
  const SimulationOptions& options() const { return options_; }

  /// Limited slopes of the current field.
  std::vector<CellGradient> gradients() const;
  std::vector<double> indicator() const;

  /// Steps until field().t reaches min(t, t_end). Throws SolverError when
  /// max_steps is exceeded.
  void advance_to(double t);

  const std::vector<StepRecord>& records() const { return records_; }
  const std::vector<AdaptReport>& adapt_reports() const { return adapt_reports_; }

  std::function<void(const StepRecord&)> on_step;
  std::function<void(const AdaptReport&)> on_adapt;

 private:
  void adapt();
  void refine_initial();

  SimulationOptions options_;
  Stepper stepper_;
  TriMesh mesh_;
  std::optional<AdaptiveMesh> adaptive_;
  SolutionField field_;
  std::vector<StepRecord> records_;
  std::vector<AdaptReport> adapt_reports_;
};

}  // namespace avalanche
