#include "avalanche/io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "avalanche/adaptivity.hpp"
#include "avalanche/simulation.hpp"

namespace avalanche {

Frame make_frame(const TriMesh& mesh, std::span<const State> cells, double time, double h_dry,
                 double h_thin) {
  Frame f;
  f.time = time;
  f.mesh = mesh;
  f.cells.assign(cells.begin(), cells.end());
  f.gradients = reconstruct(mesh, cells, h_thin);
  f.indicator = error_indicator(mesh, cells, f.gradients);
  f.h_dry = h_dry;
  f.u.resize(cells.size());
  f.v.resize(cells.size());
  for (Index i = 0; i < cells.size(); ++i) {
    const PrimitiveState p = primitive_from_conserved(cells[i], h_dry);
    f.u[i] = p.u;
    f.v[i] = p.v;
  }
  return f;
}

void write_vtk(const Frame& frame, std::ostream& out) {
  const TriMesh& m = frame.mesh;
  out << std::setprecision(9);
  out << "# vtk DataFile Version 3.0\n";
  out << "avalanche frame t=" << frame.time << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << m.vertices().size() << " double\n";
  for (const Vec2& p : m.vertices()) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << m.num_cells() << ' ' << 4 * m.num_cells() << '\n';
  for (const Cell& c : m.cells()) {
    out << "3 " << c.vertices[0] << ' ' << c.vertices[1] << ' ' << c.vertices[2] << '\n';
  }
  out << "CELL_TYPES " << m.num_cells() << '\n';
  for (Index i = 0; i < m.num_cells(); ++i) out << "5\n";
  out << "CELL_DATA " << m.num_cells() << '\n';

  auto array = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Index i = 0; i < m.num_cells(); ++i) out << value(i) << '\n';
  };
  array("h", [&](Index i) { return frame.cells[i].h; });
  array("u", [&](Index i) { return frame.u[i]; });
  array("v", [&](Index i) { return frame.v[i]; });
  array("E_tau", [&](Index i) { return frame.indicator[i]; });
}

void write_vtk(const Frame& frame, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_vtk(frame, out);
  if (!out) throw Error("write failed for " + path.string());
}

VtkData read_vtk(std::istream& in) {
  VtkData data;
  std::string token;
  auto expect = [&](const std::string& word) {
    if (!(in >> token) || token != word) throw Error("VTK: expected '" + word + "'");
  };
  std::string line;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) {
  }
  std::size_t n = 0;
  std::string type;
  expect("POINTS");
  in >> n >> type;
  data.points.resize(n);
  for (auto& p : data.points) {
    double z = 0.0;
    in >> p.x >> p.y >> z;
  }
  std::size_t nc = 0, total = 0;
  expect("CELLS");
  in >> nc >> total;
  data.triangles.resize(nc);
  for (auto& t : data.triangles) {
    int count = 0;
    in >> count >> t[0] >> t[1] >> t[2];
    if (count != 3) throw Error("VTK: non-triangle cell");
  }
  expect("CELL_TYPES");
  in >> nc;
  for (std::size_t i = 0; i < nc; ++i) in >> token;
  expect("CELL_DATA");
  in >> nc;
  while (in >> token) {
    if (token != "SCALARS") throw Error("VTK: unexpected token '" + token + "'");
    std::string name, kind;
    int comps = 0;
    in >> name >> kind >> comps;
    expect("LOOKUP_TABLE");
    in >> token;
    auto& values = data.cell_arrays[name];
    values.resize(nc);
    for (auto& x : values) in >> x;
  }
  if (in.bad()) throw Error("VTK: read failure");
  return data;
}

std::vector<ProfileRow> sample_profile(const Frame& frame, const ProfileLine& line) {
  std::vector<ProfileRow> rows;
  rows.reserve(static_cast<std::size_t>(line.samples));
  const Vec2 d = line.end - line.start;
  const double length = norm(d);
  for (int k = 0; k < line.samples; ++k) {
    const double s = line.samples > 1 ? static_cast<double>(k) / (line.samples - 1) : 0.0;
    ProfileRow row;
    row.x = line.start + d * s;
    row.s = length * s;
    if (const auto c = frame.mesh.locate(row.x)) {
      const Cell& cell = frame.mesh.cell(*c);
      const State t = evaluate_trace(frame.cells[*c], frame.gradients[*c], row.x - cell.barycenter);
      const PrimitiveState p = primitive_from_conserved(t, frame.h_dry);
      row.h = p.h;
      row.u = p.u;
      row.v = p.v;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_profile_csv(std::span<const ProfileRow> rows, std::ostream& out) {
  out << std::setprecision(9) << "s,x,y,h,u,v\n";
  for (const ProfileRow& r : rows) {
    out << r.s << ',' << r.x.x << ',' << r.x.y << ',' << r.h << ',' << r.u << ',' << r.v << '\n';
  }
}

void write_cells_csv(const Frame& frame, std::ostream& out) {
  out << std::setprecision(9) << "id,x,y,h,hu,hv,u,v,E_tau\n";
  for (Index i = 0; i < frame.mesh.num_cells(); ++i) {
    const Vec2 b = frame.mesh.cell(i).barycenter;
    const State& s = frame.cells[i];
    out << i << ',' << b.x << ',' << b.y << ',' << s.h << ',' << s.hu << ',' << s.hv << ','
        << frame.u[i] << ',' << frame.v[i] << ',' << frame.indicator[i] << '\n';
  }
}

double l1_error(const TriMesh& mesh, std::span<const State> cells, const DamBreakExact& exact, double t) {
  double diff = 0.0;
  double ref = 0.0;
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const Cell& c = mesh.cell(i);
    const double he = exact_dambreak(exact, c.barycenter.x, t).h;
    diff += std::abs(cells[i].h - he) * c.area;
    ref += he * c.area;
  }
  return diff / ref;
}

namespace {

std::vector<double> output_times(double t_end, double interval) {
  std::vector<double> times{0.0};
  if (interval > 0.0) {
    for (int k = 1;; ++k) {
      const double t = k * interval;
      if (t >= t_end - 1e-9 * interval) break;
      times.push_back(t);
    }
  }
  if (t_end > 0.0) times.push_back(t_end);
  return times;
}

std::string numbered(const char* stem, std::size_t k, const char* ext) {
  std::ostringstream os;
  os << stem << '_' << std::setw(4) << std::setfill('0') << k << ext;
  return os.str();
}

TriMesh build_mesh(const RunConfig& config) {
  if (!config.mesh_file.empty()) {
    std::ifstream in(config.mesh_file);
    if (!in) throw ConfigError("cannot open mesh file '" + config.mesh_file + "'");
    return load_mesh(in);
  }
  return generate_box_mesh(config.scenario.x, config.scenario.y, config.nx, config.ny);
}

}  // namespace

RunSummary run(const RunConfig& config) {
  config.validate();
  const auto wall_start = std::chrono::steady_clock::now();

  TriMesh mesh = [&] {
    try {
      return build_mesh(config);
    } catch (const MeshError& e) {
      throw ConfigError(std::string("mesh: ") + e.what());
    }
  }();
  std::optional<DamBreakExact> exact;
  if (std::holds_alternative<DamBreakInitial>(config.scenario.initial)) {
    exact = dam_break_exact(config.scenario);
  }

  SimulationOptions options{config.step, config.adapt, config.adapt_config};
  Simulation sim(config.scenario, mesh, options);

  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  std::ofstream step_log(dir / "steps.log");
  step_log << "# step t dt mass max_wave_speed clamps\n";
  sim.on_step = [&](const StepRecord& r) { step_log << format_record(r) << '\n'; };
  std::ofstream adapt_log;
  if (config.adapt) {
    adapt_log.open(dir / "adapt.log");
    adapt_log << "# cells_before cells_after refined coarsened skipped mass_before mass_after\n";
    sim.on_adapt = [&](const AdaptReport& r) { adapt_log << format_report(r) << '\n'; };
  }

  RunSummary summary;
  const double h_dry = config.scenario.params.h_dry;
  const auto times = output_times(config.step.t_end, config.output_interval);
  for (std::size_t k = 0; k < times.size(); ++k) {
    sim.advance_to(times[k]);
    const Frame frame = make_frame(sim.mesh(), sim.field().cells, sim.field().t, h_dry,
                                   config.scenario.params.h_thin);
    if (config.write_vtk) write_vtk(frame, dir / numbered("frame", k, ".vtk"));
    if (config.write_csv) {
      std::ofstream cells(dir / numbered("cells", k, ".csv"));
      write_cells_csv(frame, cells);
      if (config.profile) {
        std::ofstream prof(dir / numbered("profile", k, ".csv"));
        write_profile_csv(sample_profile(frame, *config.profile), prof);
      }
    }
    summary.frame_times.push_back(frame.time);
    summary.mass_history.push_back(total_mass(frame.mesh, frame.cells));
    if (exact) summary.l1_errors.push_back(l1_error(frame.mesh, frame.cells, *exact, frame.time));
  }
  summary.steps = sim.field().step;
  summary.frames = times.size();
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  std::ofstream out(dir / "summary.txt");
  out << std::setprecision(9);
  out << "scenario " << config.scenario.name << '\n';
  out << "cells " << sim.mesh().num_cells() << '\n';
  out << "steps " << summary.steps << '\n';
  out << "frames " << summary.frames << '\n';
  out << "wall_seconds " << summary.wall_seconds << '\n';
  out << "# frame t mass" << (exact ? " l1_error" : "") << '\n';
  for (std::size_t k = 0; k < summary.frame_times.size(); ++k) {
    out << k << ' ' << summary.frame_times[k] << ' ' << summary.mass_history[k];
    if (exact) out << ' ' << summary.l1_errors[k];
    out << '\n';
  }
  return summary;
}

int run_main(const RunConfig& config, std::ostream& err) {
  try {
    const RunSummary s = run(config);
    err << "completed " << s.steps << " steps, " << s.frames << " frames in " << s.wall_seconds
        << " s\n";
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "solver abort: " << e.what() << '\n';
    return kSolverAbort;
  }
}

}  // namespace avalanche
