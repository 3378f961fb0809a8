#include "cqed/runs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "cqed/error.hpp"
#include "cqed/observables.hpp"

namespace cqed {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

SteadyStateOptions solver_options(const RunConfig& c) {
  SteadyStateOptions o;
  o.method = c.solver;
  o.residual_tol = c.residual_tol;
  return o;
}

SteadyState solve(const RunConfig& c, const HilbertSpace& space, const DriveConfig& drive, double detuning) {
  const Operator h = build_hamiltonian(c, space, drive, detuning);
  return steady_state(build_liouvillian(h, c.system_params()), solver_options(c));
}

Operator mode(const HilbertSpace& space, const std::string& label) {
  return embed(annihilation(space.factor(label).dim - 1), label, space);
}

Detection detect(const SteadyState& ss, const std::string& label, const DriveConfig& drive) {
  Detection d;
  d.residual = ss.residual;
  d.iterations = ss.iterations;
  d.method = ss.method;
  const Operator a = mode(ss.rho.space(), label);
  d.transmission = transmission(ss.rho, a, drive);
  d.g2_zero = g2_zero(ss.rho, a);
  return d;
}

Detection failure(const std::exception& e) {
  Detection d;
  d.error = e.what();
  return d;
}

DriveConfig cavity_drive(const RunConfig& c, DriveTarget target) {
  DriveConfig d = c.drive_config();
  if (d.target == DriveTarget::atom_z || std::holds_alternative<Saturation>(d.strength))
    throw ConfigError("this run needs a cavity drive (drive.target cavity_z or cavity_y with n0)");
  d.target = target;
  return d;
}

json detection_json(const Detection& d) {
  json j = {{"transmission", d.transmission}, {"g2_zero", d.g2_zero}};
  if (d.ok()) {
    j["residual"] = d.residual;
    j["iterations"] = d.iterations;
    j["method"] = d.method;
  } else {
    j["error"] = d.error;
  }
  return j;
}

}  // namespace

HilbertSpace build_space(const RunConfig& c, int n_z, int n_y) {
  return c.system == SystemKind::jc ? HilbertSpace::jaynes_cummings(n_z) : HilbertSpace::cavity_qed(n_z, n_y);
}

Operator build_hamiltonian(const RunConfig& c, const HilbertSpace& space, const DriveConfig& drive,
                           double detuning_over_g0) {
  SystemParams p = c.system_params();
  p = p.with_probe_detuning(detuning_over_g0 * p.g0);
  if (c.system == SystemKind::jc) return hamiltonian_jc(p, space) + drive_term_jc(drive, p, space);
  const DipoleSet dipoles = build_dipole_set(AtomicLevelScheme::cesium_d2());
  if (c.system == SystemKind::ideal) {
    p = p.without_corrections();
    return hamiltonian_ideal(p, dipoles, space) + drive_term(drive, p, dipoles, space);
  }
  return hamiltonian_full(p, dipoles, space) + drive_term(drive, p, dipoles, space);
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int n = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min(n, count);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string SweepRow::flags() const {
  std::string f;
  if (!zz.ok()) f += "zz_failed";
  if (has_yz && !yz.ok()) f += f.empty() ? "yz_failed" : ";yz_failed";
  return f.empty() ? "ok" : f;
}

bool SweepRow::failed() const { return !zz.ok() && (!has_yz || !yz.ok()); }

int SweepTable::failed_points() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failed(); }));
}

std::vector<EigenReport> run_eigen(const RunConfig& c) {
  const int n_max = c.eigen_max_n;
  const HilbertSpace space = build_space(c, std::max(n_max, 1), std::max(n_max, 1));
  SystemParams p = c.system_params();
  Operator h;
  if (c.system == SystemKind::jc) {
    h = hamiltonian_jc(p, space);
  } else {
    const DipoleSet d = build_dipole_set(AtomicLevelScheme::cesium_d2());
    h = c.system == SystemKind::ideal ? hamiltonian_ideal(p.without_corrections(), d, space)
                                      : hamiltonian_full(p, d, space);
  }
  std::vector<EigenReport> out(static_cast<std::size_t>(n_max + 1));
  parallel_for(n_max + 1, c.workers, [&](int n) { out[n] = eigen_table(h, n, p.g0, c.eigen_cluster_tol); });
  return out;
}

SweepTable run_spectrum(const RunConfig& c) {
  const DriveConfig drive_z = cavity_drive(c, DriveTarget::cavity_z);
  const bool jc = c.system == SystemKind::jc;
  const DriveConfig drive_y = jc ? drive_z : cavity_drive(c, DriveTarget::cavity_y);
  const HilbertSpace space = build_space(c, c.n_z, c.n_y);
  const auto grid = c.sweep.values();

  SweepTable table;
  table.kind = "spectrum";
  table.rows.resize(grid.size());
  parallel_for(static_cast<int>(grid.size()), c.workers, [&](int i) {
    SweepRow& row = table.rows[i];
    row.detuning_over_g0 = grid[i];
    row.has_yz = !jc;
    try {
      row.zz = detect(solve(c, space, drive_z, grid[i]), "mode_z", drive_z);
    } catch (const std::exception& e) {
      row.zz = failure(e);
    }
    if (jc) return;
    try {
      row.yz = detect(solve(c, space, drive_y, grid[i]), "mode_z", drive_y);
    } catch (const std::exception& e) {
      row.yz = failure(e);
    }
  });
  return table;
}

SweepTable run_atom_drive(const RunConfig& c) {
  const DriveConfig drive = c.drive_config();
  if (drive.target != DriveTarget::atom_z) throw ConfigError("atom-drive needs drive.target = atom_z");
  if (!std::holds_alternative<Saturation>(drive.strength))
    throw ConfigError("atom-drive needs a saturation parameter (drive.s)");
  const bool jc = c.system == SystemKind::jc;
  if (!jc && c.n_y < 2) throw ConfigError("atom-drive detects mode y and needs fock.n_y >= 2");
  const HilbertSpace space = build_space(c, c.n_z, c.n_y);
  const auto grid = c.sweep.values();

  SweepTable table;
  table.kind = "atom-drive";
  table.rows.resize(grid.size());
  parallel_for(static_cast<int>(grid.size()), c.workers, [&](int i) {
    SweepRow& row = table.rows[i];
    row.detuning_over_g0 = grid[i];
    row.has_yz = !jc;
    try {
      const SteadyState ss = solve(c, space, drive, grid[i]);
      row.zz = detect(ss, "mode_z", drive);
      if (!jc) row.yz = detect(ss, "mode_y", drive);
    } catch (const std::exception& e) {
      row.zz = failure(e);
      if (!jc) row.yz = failure(e);
    }
  });
  return table;
}

TauResult run_g2tau(const RunConfig& c) {
  const DriveConfig drive = c.drive_config();
  const HilbertSpace space = build_space(c, c.n_z, c.n_y);
  TauResult out;
  out.detuning_over_g0 = c.probe_detuning_over_g0;
  const Operator h = build_hamiltonian(c, space, drive, c.probe_detuning_over_g0);
  const Liouvillian l = build_liouvillian(h, c.system_params());
  const SteadyState ss = steady_state(l, solver_options(c));
  out.steady = detect(ss, "mode_z", drive);

  const auto grid_ns = c.tau_grid_ns.values();
  std::vector<double> grid(grid_ns.size());
  std::transform(grid_ns.begin(), grid_ns.end(), grid.begin(), ns_to_internal);
  const auto points = g2_tau(l, ss.rho, mode(space, "mode_z"), grid);
  for (std::size_t i = 0; i < points.size(); ++i) out.points.push_back({grid_ns[i], points[i].g2});

  for (std::size_t i = 1; i < out.points.size(); ++i) {
    const auto& a = out.points[i - 1];
    const auto& b = out.points[i];
    if (b.tau > 0.0 && a.g2 < 1.0 && b.g2 >= 1.0) {
      out.first_crossing_ns = a.tau + (1.0 - a.g2) * (b.tau - a.tau) / (b.g2 - a.g2);
      break;
    }
  }
  return out;
}

ConvergenceResult run_convergence_check(const RunConfig& c) {
  const bool jc = c.system == SystemKind::jc;
  const DriveConfig drive = cavity_drive(c, jc ? DriveTarget::cavity_z : DriveTarget::cavity_y);
  ConvergenceResult r;
  r.detuning_over_g0 = c.probe_detuning_over_g0;
  r.n_z = c.n_z;
  r.n_y = c.n_y;
  r.n_z_raised = c.n_z + 1;
  r.n_y_raised = jc ? c.n_y : c.n_y + 1;
  r.threshold = c.convergence_threshold;
  double g2[2];
  parallel_for(2, c.workers, [&](int k) {
    const HilbertSpace space = k == 0 ? build_space(c, r.n_z, r.n_y) : build_space(c, r.n_z_raised, r.n_y_raised);
    g2[k] = detect(solve(c, space, drive, r.detuning_over_g0), "mode_z", drive).g2_zero;
  });
  r.g2_base = g2[0];
  r.g2_raised = g2[1];
  r.relative_change = std::abs(g2[1] - g2[0]) / std::abs(g2[1]);
  r.converged = r.relative_change < r.threshold;
  return r;
}

FilterResult run_filter(const RunConfig& c) {
  FilterResult r;
  r.spec = c.filter_spec();
  r.output = filter_output(r.spec);
  if (r.spec.coeffs.size() >= 3) r.verdict = classify(r.spec);
  if (r.spec.coeffs.size() >= 2 && std::abs(r.spec.coeffs[1]) > 0.0) r.weak_field_g2 = weak_field_g2(r.spec);
  return r;
}

void write_eigen(std::ostream& out, const RunConfig& c, const std::vector<EigenReport>& reports) {
  if (c.output_format == "json") {
    json rows = json::array();
    for (const auto& r : reports) {
      json factors = json::array();
      for (std::size_t i = 0; i < r.factors.size(); ++i)
        factors.push_back({{"k", r.k_of(i)}, {"epsilon", r.factors[i].epsilon}, {"degeneracy", r.factors[i].degeneracy}});
      rows.push_back({{"n", r.n},
                      {"manifold_dim", r.manifold_dim},
                      {"max_residual", r.max_residual},
                      {"ambiguous", r.ambiguous},
                      {"factors", factors}});
    }
    out << json{{"command", "eigen"}, {"basis_order", "atom x mode_z x mode_y"}, {"config", to_json(c)},
                {"manifolds", rows}}
               .dump(2)
        << '\n';
    return;
  }
  out << "n,k,epsilon,degeneracy\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.factors.size(); ++i)
      out << r.n << ',' << r.k_of(i) << ',' << num(r.factors[i].epsilon) << ',' << r.factors[i].degeneracy << '\n';
}

void write_sweep(std::ostream& out, const RunConfig& c, const SweepTable& t) {
  if (c.output_format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = {{"detuning_over_g0", r.detuning_over_g0}, {"zz", detection_json(r.zz)}, {"flags", r.flags()}};
      if (r.has_yz) row["yz"] = detection_json(r.yz);
      rows.push_back(row);
    }
    out << json{{"command", t.kind}, {"basis_order", "atom x mode_z x mode_y"}, {"config", to_json(c)},
                {"failed_points", t.failed_points()}, {"rows", rows}}
               .dump(2)
        << '\n';
    return;
  }
  out << "detuning_over_g0,T_zz,T_yz,g2_zz,g2_yz,flags\n";
  for (const auto& r : t.rows)
    out << num(r.detuning_over_g0) << ',' << num(r.zz.transmission) << ',' << num(r.yz.transmission) << ','
        << num(r.zz.g2_zero) << ',' << num(r.yz.g2_zero) << ',' << r.flags() << '\n';
}

void write_tau(std::ostream& out, const RunConfig& c, const TauResult& t) {
  if (c.output_format == "json") {
    json pts = json::array();
    for (const auto& p : t.points) pts.push_back({{"tau_ns", p.tau}, {"g2", p.g2}});
    json j = {{"command", "g2tau"},
              {"config", to_json(c)},
              {"detuning_over_g0", t.detuning_over_g0},
              {"steady_state", detection_json(t.steady)},
              {"first_crossing_ns", t.first_crossing_ns ? json(*t.first_crossing_ns) : json(nullptr)},
              {"points", pts}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "tau_ns,g2\n";
  for (const auto& p : t.points) out << num(p.tau) << ',' << num(p.g2) << '\n';
}

void write_convergence(std::ostream& out, const RunConfig& c, const ConvergenceResult& r) {
  if (c.output_format == "json") {
    out << json{{"command", "convergence-check"},
                {"config", to_json(c)},
                {"detuning_over_g0", r.detuning_over_g0},
                {"fock", {r.n_z, r.n_y}},
                {"fock_raised", {r.n_z_raised, r.n_y_raised}},
                {"g2_base", r.g2_base},
                {"g2_raised", r.g2_raised},
                {"relative_change", r.relative_change},
                {"threshold", r.threshold},
                {"converged", r.converged}}
               .dump(2)
        << '\n';
    return;
  }
  out << "n_z,n_y,n_z_raised,n_y_raised,g2_base,g2_raised,relative_change,converged\n";
  out << r.n_z << ',' << r.n_y << ',' << r.n_z_raised << ',' << r.n_y_raised << ',' << num(r.g2_base) << ','
      << num(r.g2_raised) << ',' << num(r.relative_change) << ',' << (r.converged ? "true" : "false") << '\n';
}

void write_filter(std::ostream& out, const RunConfig& c, const FilterResult& r) {
  auto stats = [](const PhotonStatistics& s) {
    return json{{"p", s.p}, {"mean", s.mean}, {"g2_zero", s.g2_zero},
                {"field", {s.field.real(), s.field.imag()}}};
  };
  json amps = json::array();
  for (auto a : r.output.amplitudes) amps.push_back({a.real(), a.imag()});
  json j = {{"command", "filter"},
            {"config", to_json(c)},
            {"amplitudes", amps},
            {"pure", stats(r.output.pure)},
            {"dephased", stats(r.output.dephased)},
            {"tail_mass", r.output.tail_mass},
            {"weak_field_g2", r.weak_field_g2}};
  if (r.verdict) {
    json per_n = json::object();
    for (std::size_t i = 0; i < r.verdict->satisfied.size(); ++i)
      per_n[std::to_string(i + 2)] = static_cast<bool>(r.verdict->satisfied[i]);
    j["blockade"] = {{"satisfied", per_n}, {"blockade", r.verdict->blockade}, {"efficiency", r.verdict->efficiency}};
  }
  out << j.dump(2) << '\n';
}

}  // namespace cqed
