#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "avalanche/config.hpp"
#include "avalanche/mesh.hpp"
#include "avalanche/reconstruction.hpp"
#include "avalanche/scenarios.hpp"

namespace avalanche {

/// Snapshot of a solution for output.
struct Frame {
  double time = 0.0;
  TriMesh mesh;
  std::vector<State> cells;
  std::vector<CellGradient> gradients;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> indicator;
  double h_dry = 1e-6;
};

Frame make_frame(const TriMesh& mesh, std::span<const State> cells, double time, double h_dry,
                 double h_thin = 0.0);

/// Legacy ASCII VTK unstructured grid with cell arrays h, u, v, E_tau.
void write_vtk(const Frame& frame, std::ostream& out);
void write_vtk(const Frame& frame, const std::filesystem::path& path);

struct VtkData {
  std::vector<Vec2> points;
  std::vector<std::array<Index, 3>> triangles;
  std::map<std::string, std::vector<double>> cell_arrays;
};

/// Reads back what write_vtk produces.
VtkData read_vtk(std::istream& in);

struct ProfileRow {
  double s = 0.0;  // arc length from the line start
  Vec2 x;
  double h = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Samples the cell-wise linear representation at n equispaced points. A
/// point on a shared edge takes the lowest-id cell; points outside the mesh
/// give a dry row.
std::vector<ProfileRow> sample_profile(const Frame& frame, const ProfileLine& line);

void write_profile_csv(std::span<const ProfileRow> rows, std::ostream& out);
void write_cells_csv(const Frame& frame, std::ostream& out);

/// Relative L1 depth error against the exact dam-break solution, sampled
/// at barycenters.
double l1_error(const TriMesh& mesh, std::span<const State> cells, const DamBreakExact& exact, double t);

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kSolverAbort = 2 };

struct RunSummary {
  std::size_t steps = 0;
  std::size_t frames = 0;
  std::vector<double> frame_times;
  std::vector<double> mass_history;  // per frame
  std::vector<double> l1_errors;     // per frame, dam-break scenarios only
  double wall_seconds = 0.0;
};

/// Batch run: frames at every output interval plus t_end, step log,
/// adaptation log and summary under config.output_dir. Writes nothing when
/// setup fails.
RunSummary run(const RunConfig& config);

/// Applies `run` and maps failures to exit codes, reporting to `err`.
int run_main(const RunConfig& config, std::ostream& err);

}  // namespace avalanche
