#include "cqed/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cqed/error.hpp"

namespace cqed {

using nlohmann::json;

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::ideal: return "ideal";
    case SystemKind::full: return "full";
    case SystemKind::jc: return "jc";
  }
  return "?";
}

SystemKind system_kind_from_string(const std::string& s) {
  if (s == "ideal") return SystemKind::ideal;
  if (s == "full") return SystemKind::full;
  if (s == "jc") return SystemKind::jc;
  throw ConfigError("unknown system '" + s + "' (expected ideal, full or jc)");
}

std::vector<double> Grid::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(points, 0)));
  for (int i = 0; i < points; ++i)
    v[i] = points == 1 ? start : start + (stop - start) * static_cast<double>(i) / (points - 1);
  return v;
}

SystemParams RunConfig::system_params() const {
  return SystemParams::from_mhz(g0_mhz, kappa_mhz, gamma_mhz, delta_omega_c1_mhz, u0_mhz);
}

DriveConfig RunConfig::drive_config() const {
  DriveConfig d = drive;
  if (auto* raw = std::get_if<RawAmplitude>(&d.strength)) raw->value = from_mhz(raw->value);
  return d;
}

FilterSpec RunConfig::filter_spec() const {
  return FilterSpec{filter_coeffs, filter_alpha, filter_n_max, filter_allow_gain};
}

namespace {

void check_grid(const Grid& g, const std::string& name) {
  if (g.points < 1) throw ConfigError(name + ".points must be >= 1");
  if (!(g.start <= g.stop)) throw ConfigError(name + ".start must not exceed " + name + ".stop");
}

std::string method_name(SteadyStateMethod m) {
  switch (m) {
    case SteadyStateMethod::automatic: return "auto";
    case SteadyStateMethod::direct: return "direct";
    case SteadyStateMethod::krylov: return "krylov";
  }
  return "?";
}

SteadyStateMethod method_from_string(const std::string& s) {
  if (s == "auto") return SteadyStateMethod::automatic;
  if (s == "direct") return SteadyStateMethod::direct;
  if (s == "krylov") return SteadyStateMethod::krylov;
  throw ConfigError("unknown solver.method '" + s + "' (expected auto, direct or krylov)");
}

json complex_to_json(std::complex<double> z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& j, const std::string& name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(name + ": expected a number or [re, im]");
}

// Reads members of one JSON object, rejecting anything not consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError((path_.empty() ? "config" : path_) + ": expected an object");
  }
  void done() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("unknown config key '" + name(k) + "'");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (const json* v = find(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception&) {
        throw ConfigError("config key '" + name(key) + "' has the wrong type");
      }
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_grid(ObjectReader& parent, const std::string& key, Grid& g) {
  if (const json* v = parent.find(key)) {
    ObjectReader r(*v, parent.name(key));
    r.get("start", g.start);
    r.get("stop", g.stop);
    r.get("points", g.points);
    r.done();
  }
}

json grid_to_json(const Grid& g) { return {{"start", g.start}, {"stop", g.stop}, {"points", g.points}}; }

}  // namespace

void RunConfig::validate() const {
  if (!(g0_mhz > 0.0)) throw ConfigError("params.g0 must be > 0");
  if (!(kappa_mhz > 0.0)) throw ConfigError("params.kappa must be > 0");
  if (!(gamma_mhz > 0.0)) throw ConfigError("params.gamma must be > 0");
  drive.validate();
  check_grid(sweep, "sweep");
  check_grid(tau_grid_ns, "tau_grid");
  if (tau_grid_ns.start < 0.0) throw ConfigError("tau_grid.start must be >= 0");
  if (n_z < 2) throw ConfigError("fock.n_z must be >= 2 for g2 on mode z");
  if (system != SystemKind::jc && n_y < 1) throw ConfigError("fock.n_y must be >= 1");
  if (eigen_max_n < 0) throw ConfigError("eigen.max_n must be >= 0");
  if (!(eigen_cluster_tol > 0.0)) throw ConfigError("eigen.cluster_tol must be > 0");
  if (!(convergence_threshold > 0.0)) throw ConfigError("convergence.threshold must be > 0");
  if (!(residual_tol > 0.0)) throw ConfigError("solver.residual_tol must be > 0");
  if (output_format != "csv" && output_format != "json") throw ConfigError("output.format must be csv or json");
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

json to_json(const RunConfig& c) {
  json drive = {{"target", to_string(c.drive.target)}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PhotonNumber>) drive["n0"] = v.n0;
        else if constexpr (std::is_same_v<T, Saturation>) drive["s"] = v.s;
        else drive["raw"] = v.value;
      },
      c.drive.strength);
  json coeffs = json::array();
  for (auto t : c.filter_coeffs) coeffs.push_back(complex_to_json(t));
  return {
      {"system", to_string(c.system)},
      {"params",
       {{"g0", c.g0_mhz},
        {"kappa", c.kappa_mhz},
        {"gamma", c.gamma_mhz},
        {"delta_omega_c1", c.delta_omega_c1_mhz},
        {"u0", c.u0_mhz}}},
      {"drive", drive},
      {"sweep", grid_to_json(c.sweep)},
      {"probe_detuning_over_g0", c.probe_detuning_over_g0},
      {"fock", {{"n_z", c.n_z}, {"n_y", c.n_y}}},
      {"tau_grid", grid_to_json(c.tau_grid_ns)},
      {"eigen", {{"max_n", c.eigen_max_n}, {"cluster_tol", c.eigen_cluster_tol}}},
      {"convergence", {{"threshold", c.convergence_threshold}}},
      {"filter",
       {{"coeffs", coeffs},
        {"alpha", complex_to_json(c.filter_alpha)},
        {"n_max", c.filter_n_max},
        {"allow_gain", c.filter_allow_gain}}},
      {"solver", {{"method", method_name(c.solver)}, {"residual_tol", c.residual_tol}}},
      {"output", {{"path", c.output_path}, {"format", c.output_format}}},
      {"workers", c.workers},
  };
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  ObjectReader root(j, "");
  if (const json* v = root.find("system")) {
    if (!v->is_string()) throw ConfigError("system must be a string");
    c.system = system_kind_from_string(v->get<std::string>());
  }
  if (const json* v = root.find("params")) {
    ObjectReader r(*v, "params");
    r.get("g0", c.g0_mhz);
    r.get("kappa", c.kappa_mhz);
    r.get("gamma", c.gamma_mhz);
    r.get("delta_omega_c1", c.delta_omega_c1_mhz);
    r.get("u0", c.u0_mhz);
    r.done();
  }
  if (const json* v = root.find("drive")) {
    ObjectReader r(*v, "drive");
    std::string target = to_string(c.drive.target);
    r.get("target", target);
    c.drive.target = drive_target_from_string(target);
    const json* n0 = r.find("n0");
    const json* s = r.find("s");
    const json* raw = r.find("raw");
    const int given = (n0 != nullptr) + (s != nullptr) + (raw != nullptr);
    if (given > 1) throw ConfigError("drive: give exactly one of n0, s, raw");
    try {
      if (n0) c.drive.strength = PhotonNumber{n0->get<double>()};
      if (s) c.drive.strength = Saturation{s->get<double>()};
      if (raw) c.drive.strength = RawAmplitude{raw->get<double>()};
    } catch (const json::exception&) {
      throw ConfigError("drive strength must be a number");
    }
    if (given == 0 && c.drive.target == DriveTarget::atom_z) c.drive.strength = Saturation{0.1};
    const bool atom = c.drive.target == DriveTarget::atom_z;
    if (atom && std::holds_alternative<PhotonNumber>(c.drive.strength))
      throw ConfigError("drive: an atom drive takes s (saturation parameter), not n0");
    if (!atom && std::holds_alternative<Saturation>(c.drive.strength))
      throw ConfigError("drive: a cavity drive takes n0 (empty-cavity photon number), not s");
    r.done();
  }
  read_grid(root, "sweep", c.sweep);
  root.get("probe_detuning_over_g0", c.probe_detuning_over_g0);
  if (const json* v = root.find("fock")) {
    ObjectReader r(*v, "fock");
    r.get("n_z", c.n_z);
    r.get("n_y", c.n_y);
    r.done();
  }
  read_grid(root, "tau_grid", c.tau_grid_ns);
  if (const json* v = root.find("eigen")) {
    ObjectReader r(*v, "eigen");
    r.get("max_n", c.eigen_max_n);
    r.get("cluster_tol", c.eigen_cluster_tol);
    r.done();
  }
  if (const json* v = root.find("convergence")) {
    ObjectReader r(*v, "convergence");
    r.get("threshold", c.convergence_threshold);
    r.done();
  }
  if (const json* v = root.find("filter")) {
    ObjectReader r(*v, "filter");
    if (const json* k = r.find("coeffs")) {
      if (!k->is_array()) throw ConfigError("filter.coeffs must be an array");
      c.filter_coeffs.clear();
      for (const auto& t : *k) c.filter_coeffs.push_back(complex_from_json(t, "filter.coeffs"));
    }
    if (const json* a = r.find("alpha")) c.filter_alpha = complex_from_json(*a, "filter.alpha");
    r.get("n_max", c.filter_n_max);
    r.get("allow_gain", c.filter_allow_gain);
    r.done();
  }
  if (const json* v = root.find("solver")) {
    ObjectReader r(*v, "solver");
    std::string m = method_name(c.solver);
    r.get("method", m);
    c.solver = method_from_string(m);
    r.get("residual_tol", c.residual_tol);
    r.done();
  }
  if (const json* v = root.find("output")) {
    ObjectReader r(*v, "output");
    r.get("path", c.output_path);
    r.get("format", c.output_format);
    r.done();
  }
  root.get("workers", c.workers);
  root.done();
  return c;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    path.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    node = &(*node)[path[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
  if (value.is_null())
    node->erase(path.back());
  else
    (*node)[path.back()] = value;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  RunConfig c = config_from_json(doc);
  c.validate();
  return c;
}

}  // namespace cqed
