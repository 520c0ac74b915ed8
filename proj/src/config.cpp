#include "opschwarz/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "opschwarz/errors.hpp"

namespace opschwarz {

const char* to_string(Problem p) {
  switch (p) {
    case Problem::StaticBCs: return "static";
    case Problem::TimeVaryingBCs: return "time_varying";
    case Problem::Custom: return "custom";
  }
  return "?";
}

Problem problem_from_string(const std::string& name) {
  for (Problem p : {Problem::StaticBCs, Problem::TimeVaryingBCs, Problem::Custom})
    if (name == to_string(p)) return p;
  throw ConfigError("unknown problem '" + name + "' (expected static, time_varying or custom)");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + v + "'");
}

SideCondition to_side(const std::string& key, const std::string& v) {
  if (v.rfind("q:", 0) == 0) return SideCondition::oscillating(to_double(key, v.substr(2)));
  return SideCondition::constant(to_double(key, v));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string side_string(const SideCondition& s) {
  return s.frequency ? "q:" + fmt(*s.frequency) : fmt(s.value);
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto side = [&](Side s) {
    SideCondition left = cfg.custom_bc.side(Side::Left);
    SideCondition right = cfg.custom_bc.side(Side::Right);
    SideCondition top = cfg.custom_bc.side(Side::Top);
    SideCondition bottom = cfg.custom_bc.side(Side::Bottom);
    const SideCondition value = to_side(key, v);
    switch (s) {
      case Side::Left: left = value; break;
      case Side::Right: right = value; break;
      case Side::Top: top = value; break;
      case Side::Bottom: bottom = value; break;
    }
    cfg.custom_bc = BoundaryCondition(left, right, top, bottom);
  };

  if (key == "problem") cfg.problem = problem_from_string(v);
  else if (key == "nx") cfg.nx = to_int(key, v);
  else if (key == "ny") cfg.ny = to_int(key, v);
  else if (key == "x0") cfg.bounds.x0 = to_double(key, v);
  else if (key == "x1") cfg.bounds.x1 = to_double(key, v);
  else if (key == "y0") cfg.bounds.y0 = to_double(key, v);
  else if (key == "y1") cfg.bounds.y1 = to_double(key, v);
  else if (key == "dt") cfg.dt = to_double(key, v);
  else if (key == "T") cfg.T = to_double(key, v);
  else if (key == "layout") cfg.decomposition.layout = layout_from_string(v);
  else if (key == "overlap") cfg.decomposition.overlap = to_int(key, v);
  else if (key == "models") {
    cfg.models.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.models.push_back(model_kind_from_string(trim(item)));
    if (cfg.models.empty()) throw ConfigError("key 'models' needs at least one entry");
  } else if (key == "r") cfg.rom.r = to_int(key, v);
  else if (key == "data") cfg.rom.n_train = to_int(key, v);
  else if (key == "lambda") cfg.rom.lambda = to_double(key, v);
  else if (key == "centering") cfg.rom.centering = to_bool(key, v);
  else if (key == "rank_policy") {
    if (v == "strict") cfg.rom.rank_policy = RankPolicy::Strict;
    else if (v == "pad") cfg.rom.rank_policy = RankPolicy::Pad;
    else throw ConfigError("key 'rank_policy' expects strict or pad, got '" + v + "'");
  } else if (key == "delta_abs") cfg.schwarz.delta_abs = to_double(key, v);
  else if (key == "delta_rel") cfg.schwarz.delta_rel = to_double(key, v);
  else if (key == "max_sweeps") cfg.schwarz.max_sweeps = to_int(key, v);
  else if (key == "repeats") cfg.repeats = to_int(key, v);
  else if (key == "out") cfg.out = v;
  else if (key == "snapshots") cfg.snapshots = v;
  else if (key == "bc_left") side(Side::Left);
  else if (key == "bc_right") side(Side::Right);
  else if (key == "bc_top") side(Side::Top);
  else if (key == "bc_bottom") side(Side::Bottom);
  else if (key == "ic") cfg.ic = to_double(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    set_config_value(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "problem = " << to_string(c.problem) << '\n'
     << "nx = " << c.nx << '\n'
     << "ny = " << c.ny << '\n'
     << "x0 = " << fmt(c.bounds.x0) << '\n'
     << "x1 = " << fmt(c.bounds.x1) << '\n'
     << "y0 = " << fmt(c.bounds.y0) << '\n'
     << "y1 = " << fmt(c.bounds.y1) << '\n'
     << "dt = " << fmt(c.dt) << '\n'
     << "T = " << fmt(c.T) << '\n'
     << "layout = " << to_string(c.decomposition.layout) << '\n'
     << "overlap = " << c.decomposition.overlap << '\n'
     << "models = " << c.assignment_string() << '\n'
     << "r = " << c.rom.r << '\n'
     << "data = " << c.rom.n_train << '\n'
     << "lambda = " << fmt(c.rom.lambda) << '\n'
     << "centering = " << (c.rom.centering ? "true" : "false") << '\n'
     << "rank_policy = " << (c.rom.rank_policy == RankPolicy::Pad ? "pad" : "strict") << '\n'
     << "delta_abs = " << fmt(c.schwarz.delta_abs) << '\n'
     << "delta_rel = " << fmt(c.schwarz.delta_rel) << '\n'
     << "max_sweeps = " << c.schwarz.max_sweeps << '\n'
     << "repeats = " << c.repeats << '\n'
     << "out = " << c.out << '\n';
  if (!c.snapshots.empty()) os << "snapshots = " << c.snapshots << '\n';
  os << "bc_left = " << side_string(c.custom_bc.side(Side::Left)) << '\n'
     << "bc_right = " << side_string(c.custom_bc.side(Side::Right)) << '\n'
     << "bc_top = " << side_string(c.custom_bc.side(Side::Top)) << '\n'
     << "bc_bottom = " << side_string(c.custom_bc.side(Side::Bottom)) << '\n'
     << "ic = " << fmt(c.ic) << '\n';
  return os.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void ExperimentConfig::validate() const {
  const StructuredGrid g = grid();  // checks nx, ny, bounds
  step_count(dt, T);
  decomposition.validate(g);
  schwarz.validate();
  const int n_sub = decomposition.layout == Layout::Monolithic  ? 1
                    : decomposition.layout == Layout::FourSquares ? 4
                                                                  : 2;
  if (models.size() != 1 && static_cast<int>(models.size()) != n_sub)
    throw ConfigError("models lists " + std::to_string(models.size()) +
                      " entries but the layout has " + std::to_string(n_sub) + " subdomains");
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (has_rom()) {
    if (rom.r < 1) throw ConfigError("r must be at least 1");
    if (rom.n_train < 2 || rom.n_train > step_count(dt, T) + 1)
      throw ConfigError("data must lie in [2, T/dt + 1]");
    if (!(rom.lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  }
  if (out.empty()) throw ConfigError("out must not be empty");
}

BoundaryCondition ExperimentConfig::boundary_condition() const {
  switch (problem) {
    case Problem::StaticBCs: return BoundaryCondition::static_case();
    case Problem::TimeVaryingBCs: return BoundaryCondition::time_varying_case();
    case Problem::Custom: return custom_bc;
  }
  return custom_bc;
}

Vector ExperimentConfig::initial_condition(const StructuredGrid& g) const {
  const double value = problem == Problem::Custom ? ic : 0.0;
  return Vector::Constant(g.num_nodes(), value);
}

bool ExperimentConfig::has_rom() const {
  for (ModelKind m : models)
    if (m == ModelKind::Rom) return true;
  return false;
}

std::string ExperimentConfig::snapshot_path() const {
  if (!snapshots.empty()) return snapshots;
  return (std::filesystem::path(out) / "monolithic.csv").string();
}

std::string ExperimentConfig::assignment_string(char sep) const {
  std::string s;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (i) s += sep;
    s += to_string(models[i]);
  }
  return s;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  auto rect = [](const Rect& a) { return std::tie(a.x0, a.x1, a.y0, a.y1); };
  return problem == o.problem && nx == o.nx && ny == o.ny && rect(bounds) == rect(o.bounds) &&
         dt == o.dt && T == o.T && decomposition.layout == o.decomposition.layout &&
         decomposition.overlap == o.decomposition.overlap && models == o.models &&
         rom.r == o.rom.r && rom.n_train == o.rom.n_train && rom.lambda == o.rom.lambda &&
         rom.centering == o.rom.centering && rom.rank_policy == o.rom.rank_policy &&
         schwarz.delta_abs == o.schwarz.delta_abs && schwarz.delta_rel == o.schwarz.delta_rel &&
         schwarz.max_sweeps == o.schwarz.max_sweeps && repeats == o.repeats && out == o.out &&
         snapshots == o.snapshots && custom_bc == o.custom_bc && ic == o.ic;
}

}  // namespace opschwarz
