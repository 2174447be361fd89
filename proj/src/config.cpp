#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "triwave/errors.hpp"
#include "triwave/io.hpp"

namespace triwave {

namespace pt = boost::property_tree;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"grid", {"dim", "n_per_dim", "half_width"}},
      {"params", {"gamma1", "gamma2", "gamma3", "omega", "c"}},
      {"solver", {"max_iters", "step_size", "tol_grad", "restarts", "seed", "case"}},
      {"evolve", {"dt", "t_final", "snapshot_every", "blowup_factor", "keep_snapshots", "frame_velocity"}},
      {"data", {"kind", "path", "amp_u", "amp_v", "amp_w", "width", "center", "momentum"}},
      {"scan", {"speeds", "direction", "mu_unit", "branch"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ValidationError(field + ": expected a number, got '" + text + "'");
  }
  if (used != t.size()) throw ValidationError(field + ": expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw ValidationError(field + ": expected an integer, got '" + text + "'");
  }
  if (used != t.size()) throw ValidationError(field + ": expected an integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ValidationError(field + ": expected true or false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& field, const std::string& text) {
  std::string t = text;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(field, tok));
  return out;
}

Eigen::VectorXd to_vector(const std::string& field, const std::string& text) {
  const auto v = to_list(field, text);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

std::string list_text(const double* data, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += format_double(data[i]);
  }
  return out;
}

std::string list_text(const Eigen::VectorXd& v) {
  return list_text(v.data(), static_cast<std::size_t>(v.size()));
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end() || !body.data().empty())
      throw ValidationError("config: unknown section or top-level key '" + section + "'");
    for (const auto& [key, value] : body)
      if (!it->second.count(key))
        throw ValidationError("config: unknown key '" + section + "." + key + "'");
  }

  RunConfig cfg;
  auto get = [&](const std::string& path) { return tree.get_optional<std::string>(path); };
  auto num = [&](const std::string& path, double& dst) {
    if (auto v = get(path)) dst = to_double(path, *v);
  };
  auto integer = [&](const std::string& path, auto& dst) {
    if (auto v = get(path)) dst = static_cast<std::decay_t<decltype(dst)>>(to_integer(path, *v));
  };
  auto vec = [&](const std::string& path, Eigen::VectorXd& dst) {
    if (auto v = get(path)) dst = to_vector(path, *v);
  };
  auto str = [&](const std::string& path, std::string& dst) {
    if (auto v = get(path)) dst = trim(*v);
  };

  integer("grid.dim", cfg.grid.dim);
  integer("grid.n_per_dim", cfg.grid.n_per_dim);
  num("grid.half_width", cfg.grid.half_width);

  num("params.gamma1", cfg.params.gamma1);
  num("params.gamma2", cfg.params.gamma2);
  num("params.gamma3", cfg.params.gamma3);
  num("params.omega", cfg.params.omega);
  vec("params.c", cfg.params.c);

  integer("solver.max_iters", cfg.solver.max_iters);
  num("solver.step_size", cfg.solver.step_size);
  num("solver.tol_grad", cfg.solver.tol_grad);
  integer("solver.restarts", cfg.solver.restarts);
  if (auto v = get("solver.seed")) {
    const long long s = to_integer("solver.seed", *v);
    if (s < 0) throw ValidationError("solver.seed must be non-negative");
    cfg.solver.seed = static_cast<std::uint64_t>(s);
  }
  str("solver.case", cfg.wave_case);

  num("evolve.dt", cfg.evolve.dt);
  num("evolve.t_final", cfg.evolve.t_final);
  integer("evolve.snapshot_every", cfg.evolve.snapshot_every);
  num("evolve.blowup_factor", cfg.evolve.blowup_factor);
  if (auto v = get("evolve.keep_snapshots")) cfg.evolve.keep_snapshots = to_bool("evolve.keep_snapshots", *v);
  vec("evolve.frame_velocity", cfg.evolve.frame_velocity);

  str("data.kind", cfg.data.kind);
  str("data.path", cfg.data.path);
  num("data.amp_u", cfg.data.amp_u);
  num("data.amp_v", cfg.data.amp_v);
  num("data.amp_w", cfg.data.amp_w);
  num("data.width", cfg.data.width);
  vec("data.center", cfg.data.center);
  vec("data.momentum", cfg.data.momentum);

  if (auto v = get("scan.speeds")) cfg.scan.speeds = to_list("scan.speeds", *v);
  vec("scan.direction", cfg.scan.direction);
  num("scan.mu_unit", cfg.scan.mu_unit);
  str("scan.branch", cfg.scan.branch);

  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate_config(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg.grid.dim, cfg.grid.n_per_dim, cfg.grid.half_width);
  const int dim = grid.dim();
  cfg.params.validate(dim);
  if (cfg.params.speed() > 0.0) require_boost_commensurate(grid, cfg.params);
  cfg.solver.validate();
  parse_case(cfg.wave_case);
  cfg.evolve.validate();
  if (cfg.evolve.frame_velocity.size() != 0) {
    if (cfg.evolve.frame_velocity.size() != dim)
      throw ValidationError("evolve.frame_velocity must have grid.dim entries");
    Params moving = cfg.params;
    moving.c = cfg.evolve.frame_velocity;
    require_weight_commensurate(grid, moving);
  }
  if (cfg.data.kind != "gaussian" && cfg.data.kind != "snapshot")
    throw ValidationError("data.kind must be 'gaussian' or 'snapshot'");
  if (cfg.data.kind == "snapshot" && cfg.data.path.empty())
    throw ValidationError("data.path is required when data.kind = snapshot");
  if (!(cfg.data.width > 0.0)) throw ValidationError("data.width must be positive");
  if (cfg.data.center.size() != 0 && cfg.data.center.size() != dim)
    throw ValidationError("data.center must have grid.dim entries");
  if (cfg.data.momentum.size() != 0 && cfg.data.momentum.size() != dim)
    throw ValidationError("data.momentum must have grid.dim entries");
  const std::string& b = cfg.scan.branch;
  if (b != "auto" && b != "A" && b != "B" && b != "C" && b != "D")
    throw ValidationError("scan.branch must be auto, A, B, C or D");
  if (cfg.scan.direction.size() != 0) {
    if (cfg.scan.direction.size() != dim)
      throw ValidationError("scan.direction must have grid.dim entries");
    if (!(cfg.scan.direction.norm() > 0.0)) throw ValidationError("scan.direction must be nonzero");
  }
  for (double s : cfg.scan.speeds)
    if (!(s > 0.0)) throw ValidationError("scan.speeds must be positive");
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[grid]\n"
    << "dim = " << cfg.grid.dim << "\n"
    << "n_per_dim = " << cfg.grid.n_per_dim << "\n"
    << "half_width = " << format_double(cfg.grid.half_width) << "\n\n";
  o << "[params]\n"
    << "gamma1 = " << format_double(cfg.params.gamma1) << "\n"
    << "gamma2 = " << format_double(cfg.params.gamma2) << "\n"
    << "gamma3 = " << format_double(cfg.params.gamma3) << "\n"
    << "omega = " << format_double(cfg.params.omega) << "\n"
    << "c = " << list_text(cfg.params.c) << "\n\n";
  o << "[solver]\n"
    << "max_iters = " << cfg.solver.max_iters << "\n"
    << "step_size = " << format_double(cfg.solver.step_size) << "\n"
    << "tol_grad = " << format_double(cfg.solver.tol_grad) << "\n"
    << "restarts = " << cfg.solver.restarts << "\n"
    << "seed = " << cfg.solver.seed << "\n"
    << "case = " << cfg.wave_case << "\n\n";
  o << "[evolve]\n"
    << "dt = " << format_double(cfg.evolve.dt) << "\n"
    << "t_final = " << format_double(cfg.evolve.t_final) << "\n"
    << "snapshot_every = " << cfg.evolve.snapshot_every << "\n"
    << "blowup_factor = " << format_double(cfg.evolve.blowup_factor) << "\n"
    << "keep_snapshots = " << (cfg.evolve.keep_snapshots ? "true" : "false") << "\n"
    << "frame_velocity = " << list_text(cfg.evolve.frame_velocity) << "\n\n";
  o << "[data]\n"
    << "kind = " << cfg.data.kind << "\n"
    << "path = " << cfg.data.path << "\n"
    << "amp_u = " << format_double(cfg.data.amp_u) << "\n"
    << "amp_v = " << format_double(cfg.data.amp_v) << "\n"
    << "amp_w = " << format_double(cfg.data.amp_w) << "\n"
    << "width = " << format_double(cfg.data.width) << "\n"
    << "center = " << list_text(cfg.data.center) << "\n"
    << "momentum = " << list_text(cfg.data.momentum) << "\n\n";
  o << "[scan]\n"
    << "speeds = " << list_text(cfg.scan.speeds.data(), cfg.scan.speeds.size()) << "\n"
    << "direction = " << list_text(cfg.scan.direction) << "\n"
    << "mu_unit = " << format_double(cfg.scan.mu_unit) << "\n"
    << "branch = " << cfg.scan.branch << "\n";
  return o.str();
}

Grid build_grid(const RunConfig& cfg) {
  return make_grid(cfg.grid.dim, cfg.grid.n_per_dim, cfg.grid.half_width);
}

TriField build_data(const RunConfig& cfg, const Grid& grid) {
  if (cfg.data.kind == "snapshot") {
    Snapshot snap = read_snapshot(cfg.data.path);
    if (!(snap.field.grid() == grid))
      throw ValidationError("data.path snapshot grid does not match [grid]");
    return snap.field;
  }
  const Eigen::VectorXd center =
      cfg.data.center.size() ? cfg.data.center : Eigen::VectorXd::Zero(grid.dim());
  const double amps[3] = {cfg.data.amp_u, cfg.data.amp_v, cfg.data.amp_w};
  TriField f(grid);
  for (int j = 0; j < 3; ++j)
    f[j] = gaussian(grid, amps[j], center, cfg.data.width, cfg.data.momentum).values();
  return f;
}

}  // namespace triwave
