#include "avalanche/simulation.hpp"

#include <string>

namespace avalanche {

Simulation::Simulation(ScenarioSpec scenario, const TriMesh& mesh, SimulationOptions options)
    : options_(options), stepper_(std::move(scenario), options.step), mesh_(mesh) {
  if (options_.adapt) {
    options_.adapt_config.validate();
    adaptive_.emplace(mesh_);
  }
  field_ = initial_field(this->mesh(), stepper_.scenario());
  if (adaptive_) refine_initial();
}

std::vector<CellGradient> Simulation::gradients() const {
  return reconstruct(mesh(), field_.cells, scenario().params.h_thin);
}

std::vector<double> Simulation::indicator() const {
  return error_indicator(mesh(), field_.cells, gradients());
}

void Simulation::refine_initial() {
  // Initial data is resampled after each pass instead of prolongated.
  for (int pass = 0; pass < options_.adapt_config.max_level; ++pass) {
    Marks marks = mark(indicator(), adaptive_->levels(), options_.adapt_config);
    if (marks.refine.empty()) break;
    marks.coarsen.clear();
    adaptive_->adapt(marks, field_, options_.adapt_config);
    field_ = initial_field(mesh(), stepper_.scenario());
  }
}

void Simulation::adapt() {
  const Marks marks = mark(indicator(), adaptive_->levels(), options_.adapt_config);
  if (marks.refine.empty() && marks.coarsen.empty()) return;
  const AdaptReport report = adaptive_->adapt(marks, field_, options_.adapt_config);
  stepper_.reset_branches();
  adapt_reports_.push_back(report);
  if (on_adapt) on_adapt(report);
}

void Simulation::advance_to(double t) {
  const double target = std::min(t, options_.step.t_end);
  while (field_.t < target) {
    if (field_.step >= options_.step.max_steps) {
      throw SolverError("max_steps (" + std::to_string(options_.step.max_steps) +
                        ") exceeded at t = " + std::to_string(field_.t));
    }
    const StepRecord rec = stepper_.step(mesh(), field_, target);
    records_.push_back(rec);
    if (on_step) on_step(rec);
    if (adaptive_ && field_.step % static_cast<std::size_t>(options_.adapt_config.adapt_interval) == 0) {
      adapt();
    }
  }
}

}  // namespace avalanche
