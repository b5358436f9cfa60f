#include "nlsctl_cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "nlsctl/errors.hpp"
#include "nlsctl/io.hpp"

namespace nlsctl::cli {
namespace {

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(display(), "expected an object");
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const {
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const Json* find(const std::string& key) {
    used_.insert(key);
    return has(key) ? &node_.at(key) : nullptr;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (const Json* v = find(key)) out = convert<T>(*v, child_path(key));
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    if (const Json* v = find(key)) out = convert<T>(*v, child_path(key));
  }

  ObjectReader object(const std::string& key) {
    used_.insert(key);
    static const Json empty = Json::object();
    return ObjectReader(has(key) ? node_.at(key) : empty, child_path(key));
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.contains(key)) throw ConfigError(child_path(key), "unknown key");
    }
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  template <class T>
  static T convert(const Json& v, const std::string& path) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(path, "expected a string");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
        if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() &&
            v.get<std::int64_t>() < 0) {
          throw ConfigError(path, "expected a non-negative integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(path, "expected a number");
      }
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path, e.what());
    }
  }

  const Json& node_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<double> read_vector(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

void read_vector(ObjectReader& r, const std::string& key, std::vector<double>& out) {
  if (const Json* v = r.find(key)) out = read_vector(*v, r.child_path(key));
}

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed,
                    const std::string& path) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ConfigError(path, "'" + value + "' is not one of {" + list + "}");
}

PotentialSpec parse_potential(ObjectReader r) {
  PotentialSpec s;
  r.read("shape", s.shape);
  require_one_of(s.shape, {"gaussian", "cosine", "constant"}, r.child_path("shape"));
  r.read("amplitude", s.amplitude);
  read_vector(r, "center", s.center);
  r.read("width", s.width);
  read_vector(r, "wavenumber", s.wavenumber);
  r.read("phase", s.phase);
  r.finish();
  return s;
}

FieldSpec parse_field(ObjectReader r) {
  FieldSpec s;
  r.read("shape", s.shape);
  require_one_of(s.shape, {"gaussian", "zero", "file"}, r.child_path("shape"));
  r.read("amplitude", s.amplitude);
  read_vector(r, "center", s.center);
  r.read("width", s.width);
  read_vector(r, "momentum", s.momentum);
  r.read("path", s.path);
  if (s.shape == "file" && s.path.empty()) throw ConfigError(r.child_path("path"), "required for shape 'file'");
  r.finish();
  return s;
}

ControlSpec parse_control(ObjectReader r) {
  ControlSpec s;
  r.read("shape", s.shape);
  require_one_of(s.shape, {"constant", "sine", "file"}, r.child_path("shape"));
  read_vector(r, "value", s.value);
  r.read("amplitude", s.amplitude);
  r.read("frequency", s.frequency);
  r.read("phase", s.phase);
  r.read("path", s.path);
  if (s.shape == "file" && s.path.empty()) throw ConfigError(r.child_path("path"), "required for shape 'file'");
  r.finish();
  return s;
}

TargetSpec parse_target(ObjectReader r) {
  TargetSpec s;
  r.read("kind", s.kind);
  require_one_of(s.kind, {"uncontrolled-run", "controlled-run", "analytic", "file", "zero"},
                 r.child_path("kind"));
  if (r.has("control")) s.control = parse_control(r.object("control"));
  else r.find("control");
  if (r.has("field")) s.field = parse_field(r.object("field"));
  else r.find("field");
  r.read("path", s.path);
  r.read("seed", s.seed);
  if (s.kind == "controlled-run" && !s.control) {
    throw ConfigError(r.child_path("control"), "required for kind 'controlled-run'");
  }
  if (s.kind == "analytic" && !s.field) {
    throw ConfigError(r.child_path("field"), "required for kind 'analytic'");
  }
  if (s.kind == "file" && s.path.empty()) throw ConfigError(r.child_path("path"), "required for kind 'file'");
  r.finish();
  return s;
}

NoiseSpec parse_noise(ObjectReader r) {
  NoiseSpec s;
  const std::string mu_path = r.child_path("mu");
  if (const Json* mu = r.find("mu")) {
    if (!mu->is_array()) throw ConfigError(mu_path, "expected an array of [re, im] pairs");
    for (std::size_t j = 0; j < mu->size(); ++j) {
      const auto pair = read_vector((*mu)[j], mu_path + "[" + std::to_string(j) + "]");
      if (pair.size() != 2) throw ConfigError(mu_path + "[" + std::to_string(j) + "]", "expected [re, im]");
      s.mu.emplace_back(pair[0], pair[1]);
    }
  }
  const std::string prof_path = r.child_path("profiles");
  if (const Json* prof = r.find("profiles")) {
    if (!prof->is_array()) throw ConfigError(prof_path, "expected an array");
    for (std::size_t j = 0; j < prof->size(); ++j) {
      ObjectReader p((*prof)[j], prof_path + "[" + std::to_string(j) + "]");
      NoiseProfileSpec ps;
      p.read("shape", ps.shape);
      require_one_of(ps.shape, {"constant", "bump"}, p.child_path("shape"));
      p.read("value", ps.value);
      p.read("amplitude", ps.amplitude);
      read_vector(p, "center", ps.center);
      p.read("decay", ps.decay);
      p.finish();
      s.profiles.push_back(std::move(ps));
    }
  }
  r.read("conservative", s.conservative);
  if (s.mu.empty()) throw ConfigError(mu_path, "at least one channel is required");
  if (s.profiles.empty()) {
    s.profiles.assign(s.mu.size(), NoiseProfileSpec{});
  }
  if (s.profiles.size() != s.mu.size()) {
    throw ConfigError(prof_path, "needs one profile per mu entry");
  }
  r.finish();
  return s;
}

AdmissibleSpec parse_admissible(ObjectReader r) {
  AdmissibleSpec s;
  r.read("kind", s.kind);
  require_one_of(s.kind, {"box", "ball"}, r.child_path("kind"));
  read_vector(r, "lo", s.lo);
  read_vector(r, "hi", s.hi);
  read_vector(r, "center", s.center);
  r.read("radius", s.radius);
  r.finish();
  return s;
}

// Seed streams derived from the base seed. Path i uses index i; the other
// consumers use indices far above any realistic path count.
constexpr std::uint64_t kTerminalSeedIndex = 1ULL << 40;
constexpr std::uint64_t kTrackingSeedIndex = (1ULL << 40) + 1;
constexpr std::uint64_t kStabilitySeedIndex = (1ULL << 40) + 2;

Json vec_json(const std::vector<double>& v) { return Json(v); }

Json potential_json(const PotentialSpec& s) {
  return {{"shape", s.shape},         {"amplitude", s.amplitude},
          {"center", vec_json(s.center)}, {"width", s.width},
          {"wavenumber", vec_json(s.wavenumber)}, {"phase", s.phase}};
}

Json field_json(const FieldSpec& s) {
  return {{"shape", s.shape},          {"amplitude", s.amplitude}, {"center", vec_json(s.center)},
          {"width", s.width},          {"momentum", vec_json(s.momentum)}, {"path", s.path}};
}

Json control_json(const ControlSpec& s) {
  return {{"shape", s.shape}, {"value", vec_json(s.value)}, {"amplitude", s.amplitude},
          {"frequency", s.frequency}, {"phase", s.phase}, {"path", s.path}};
}

Json target_json(const TargetSpec& s) {
  Json j = {{"kind", s.kind}, {"path", s.path}};
  j["control"] = s.control ? control_json(*s.control) : Json();
  j["field"] = s.field ? field_json(*s.field) : Json();
  j["seed"] = s.seed ? Json(*s.seed) : Json();
  return j;
}

std::filesystem::path resolve(const RunConfig& c, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || c.base_dir.empty() ? path : c.base_dir / path;
}

std::vector<double> per_axis(const std::vector<double>& v, int d, const std::string& path) {
  if (v.empty()) return std::vector<double>(static_cast<std::size_t>(d), 0.0);
  if (v.size() != static_cast<std::size_t>(d)) {
    throw ConfigError(path, "needs one entry per axis (" + std::to_string(d) + ")");
  }
  return v;
}

RealField sample_potential(const SpatialGrid& grid, const PotentialSpec& s,
                           const std::string& path) {
  RealField out(grid.size(), 0.0);
  const int d = grid.dimension();
  if (s.shape == "constant") {
    std::fill(out.begin(), out.end(), s.amplitude);
  } else if (s.shape == "gaussian") {
    if (!(s.width > 0.0)) throw ConfigError(path + ".width", "must be positive");
    const auto c = per_axis(s.center, d, path + ".center");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double z = grid.coordinate(i, a) - grid.center() - c[static_cast<std::size_t>(a)];
        r2 += z * z;
      }
      out[i] = s.amplitude * std::exp(-r2 / (s.width * s.width));
    }
  } else {
    const auto k = per_axis(s.wavenumber, d, path + ".wavenumber");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double arg = s.phase;
      for (int a = 0; a < d; ++a) arg += k[static_cast<std::size_t>(a)] * (grid.coordinate(i, a) - grid.center());
      out[i] = s.amplitude * std::cos(arg);
    }
  }
  return out;
}

ComplexField sample_field(const RunConfig& config, const SpatialGrid& grid, const FieldSpec& s,
                          const std::string& path) {
  ComplexField f(grid);
  if (s.shape == "zero") return f;
  if (s.shape == "file") {
    const auto traj = io::read_trajectory_binary(resolve(config, s.path));
    if (!(traj.grid == grid)) throw ConfigError(path + ".path", "grid of the dump does not match");
    return traj.fields.back();
  }
  if (!(s.width > 0.0)) throw ConfigError(path + ".width", "must be positive");
  const int d = grid.dimension();
  const auto c = per_axis(s.center, d, path + ".center");
  const auto p = per_axis(s.momentum, d, path + ".momentum");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r2 = 0.0, arg = 0.0;
    for (int a = 0; a < d; ++a) {
      const double rel = grid.coordinate(i, a) - grid.center();
      const double z = rel - c[static_cast<std::size_t>(a)];
      r2 += z * z;
      arg += p[static_cast<std::size_t>(a)] * rel;
    }
    f[i] = s.amplitude * std::exp(-r2 / (s.width * s.width)) * std::polar(1.0, arg);
  }
  return f;
}

template <class Fn>
auto in_section(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const nlsctl::Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  ObjectReader root(doc, "");

  {
    auto r = root.object("grid");
    r.read("d", c.grid.d);
    r.read("n", c.grid.n);
    r.read("L", c.grid.L);
    r.finish();
  }
  {
    auto r = root.object("model");
    r.read("lambda", c.model.lambda);
    r.read("alpha", c.model.alpha);
    if (r.has("V0")) c.model.V0 = parse_potential(r.object("V0"));
    else r.find("V0");
    const std::string vpath = r.child_path("V");
    if (const Json* v = r.find("V")) {
      if (!v->is_array()) throw ConfigError(vpath, "expected an array of potential shapes");
      for (std::size_t j = 0; j < v->size(); ++j) {
        c.model.V.push_back(parse_potential(ObjectReader((*v)[j], vpath + "[" + std::to_string(j) + "]")));
      }
    }
    r.finish();
  }
  if (root.has("initial")) c.initial = parse_field(root.object("initial"));
  else root.find("initial");
  if (root.has("noise")) c.noise = parse_noise(root.object("noise"));
  else root.find("noise");
  {
    auto r = root.object("time");
    r.read("T", c.time.T);
    r.read("M", c.time.M);
    r.read("stride", c.time.stride);
    r.read("blowup_threshold", c.time.blowup_threshold);
    r.finish();
  }
  {
    auto r = root.object("control");
    if (r.has("m")) {
      std::size_t m = 0;
      r.read("m", m);
      if (m != c.model.V.size()) {
        throw ConfigError(r.child_path("m"), "must equal the number of model.V potentials (" +
                                                 std::to_string(c.model.V.size()) + ")");
      }
    } else {
      r.find("m");
    }
    r.read("nodes", c.control.nodes);
    if (r.has("K")) c.control.K = parse_admissible(r.object("K"));
    else r.find("K");
    if (r.has("u0")) c.control.u0 = parse_control(r.object("u0"));
    else r.find("u0");
    r.finish();
  }
  {
    auto r = root.object("weights");
    r.read("gamma1", c.weights.gamma1);
    r.read("gamma2", c.weights.gamma2);
    r.read("gamma3", c.weights.gamma3);
    r.finish();
  }
  {
    auto r = root.object("mc");
    c.mc.paths = c.noise ? 1 : 0;
    r.read("paths", c.mc.paths);
    r.read("base_seed", c.mc.base_seed);
    r.finish();
  }
  {
    auto r = root.object("targets");
    if (r.has("terminal")) c.targets.terminal = parse_target(r.object("terminal"));
    else r.find("terminal");
    if (r.has("tracking")) c.targets.tracking = parse_target(r.object("tracking"));
    else r.find("tracking");
    r.finish();
    auto fill_seed = [&](TargetSpec& t, std::uint64_t index) {
      const bool run = t.kind == "uncontrolled-run" || t.kind == "controlled-run";
      if (run && c.noise && !t.seed) t.seed = derive_seed(c.mc.base_seed, index);
    };
    fill_seed(c.targets.terminal, kTerminalSeedIndex);
    fill_seed(c.targets.tracking, kTrackingSeedIndex);
  }
  {
    auto r = root.object("optimizer");
    r.read("method", c.optimizer.method);
    require_one_of(c.optimizer.method, {"pgd", "fixed-point"}, r.child_path("method"));
    r.read("theta", c.optimizer.theta);
    r.read("tol", c.optimizer.tol);
    r.read("max_iter", c.optimizer.max_iter);
    r.read("per_path_gap", c.optimizer.per_path_gap);
    r.finish();
  }
  {
    auto r = root.object("adjoint");
    r.read("mode", c.adjoint.mode);
    require_one_of(c.adjoint.mode, {"discrete-adjoint", "continuous"}, r.child_path("mode"));
    r.read("truncation", c.adjoint.truncation);
    r.finish();
  }
  {
    auto r = root.object("gradcheck");
    r.read("epsilon", c.gradcheck.epsilon);
    r.finish();
  }
  {
    auto r = root.object("diagnose");
    r.read("p", c.diagnose.p);
    r.read("source", c.diagnose.source);
    require_one_of(c.diagnose.source, {"forward", "file"}, r.child_path("source"));
    r.read("path", c.diagnose.path);
    r.read("include_adjoint", c.diagnose.include_adjoint);
    if (c.diagnose.source == "file" && c.diagnose.path.empty()) {
      throw ConfigError(r.child_path("path"), "required for source 'file'");
    }
    r.finish();
  }
  {
    auto r = root.object("stability");
    r.read("levels", c.stability.levels);
    c.stability.control_direction.shape = "sine";
    c.stability.control_direction.amplitude = 0.5;
    if (r.has("control_direction")) c.stability.control_direction = parse_control(r.object("control_direction"));
    else r.find("control_direction");
    r.read("path_scale", c.stability.path_scale);
    r.read("path_seed", c.stability.path_seed);
    if (c.noise && !c.stability.path_seed) {
      c.stability.path_seed = derive_seed(c.mc.base_seed, kStabilitySeedIndex);
    }
    r.finish();
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("<file>", "cannot read " + file.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", e.what());
  }
  return parse_config(doc, file.parent_path());
}

Json to_json(const RunConfig& c) {
  Json j;
  j["grid"] = {{"d", c.grid.d}, {"n", c.grid.n}, {"L", c.grid.L}};
  Json v = Json::array();
  for (const auto& p : c.model.V) v.push_back(potential_json(p));
  j["model"] = {{"lambda", c.model.lambda}, {"alpha", c.model.alpha},
                {"V0", c.model.V0 ? potential_json(*c.model.V0) : Json()}, {"V", v}};
  j["initial"] = field_json(c.initial);
  if (c.noise) {
    Json mu = Json::array(), prof = Json::array();
    for (const auto& m : c.noise->mu) mu.push_back({m.real(), m.imag()});
    for (const auto& p : c.noise->profiles) {
      prof.push_back({{"shape", p.shape}, {"value", p.value}, {"amplitude", p.amplitude},
                      {"center", vec_json(p.center)}, {"decay", p.decay}});
    }
    j["noise"] = {{"mu", mu}, {"profiles", prof}, {"conservative", c.noise->conservative}};
  } else {
    j["noise"] = nullptr;
  }
  j["time"] = {{"T", c.time.T}, {"M", c.time.M}, {"stride", c.time.stride},
               {"blowup_threshold", c.time.blowup_threshold}};
  Json k;
  if (c.control.K) {
    k = {{"kind", c.control.K->kind}, {"lo", vec_json(c.control.K->lo)},
         {"hi", vec_json(c.control.K->hi)}, {"center", vec_json(c.control.K->center)},
         {"radius", c.control.K->radius}};
  }
  j["control"] = {{"m", c.model.V.size()}, {"nodes", c.control.nodes}, {"K", k},
                  {"u0", control_json(c.control.u0)}};
  j["weights"] = {{"gamma1", c.weights.gamma1}, {"gamma2", c.weights.gamma2},
                  {"gamma3", c.weights.gamma3}};
  j["targets"] = {{"terminal", target_json(c.targets.terminal)},
                  {"tracking", target_json(c.targets.tracking)}};
  j["mc"] = {{"paths", c.mc.paths}, {"base_seed", c.mc.base_seed}};
  j["optimizer"] = {{"method", c.optimizer.method}, {"theta", c.optimizer.theta},
                    {"tol", c.optimizer.tol}, {"max_iter", c.optimizer.max_iter},
                    {"per_path_gap", c.optimizer.per_path_gap}};
  j["adjoint"] = {{"mode", c.adjoint.mode},
                  {"truncation", c.adjoint.truncation ? Json(*c.adjoint.truncation) : Json()}};
  j["gradcheck"] = {{"epsilon", c.gradcheck.epsilon}};
  j["diagnose"] = {{"p", c.diagnose.p}, {"source", c.diagnose.source},
                   {"path", c.diagnose.path}, {"include_adjoint", c.diagnose.include_adjoint}};
  j["stability"] = {{"levels", c.stability.levels},
                    {"control_direction", control_json(c.stability.control_direction)},
                    {"path_scale", c.stability.path_scale},
                    {"path_seed", c.stability.path_seed ? Json(*c.stability.path_seed) : Json()}};
  return j;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SpatialGrid build_grid(const RunConfig& c) {
  return in_section("grid", [&] { return SpatialGrid(c.grid.d, c.grid.n, c.grid.L); });
}

TimeGrid build_time(const RunConfig& c) {
  return in_section("time", [&] {
    TimeGrid t{c.time.T, c.time.M};
    t.validate();
    if (c.time.stride == 0) throw ConfigError("time.stride", "must be at least 1");
    if (!(c.time.blowup_threshold > 0.0)) throw ConfigError("time.blowup_threshold", "must be positive");
    return t;
  });
}

TimeGrid build_control_time(const RunConfig& c) {
  return in_section("control.nodes", [&] {
    TimeGrid t{c.time.T, c.control.nodes};
    t.validate();
    return t;
  });
}

ModelParams build_params(const RunConfig& c) {
  const SpatialGrid grid = build_grid(c);
  ModelParams p;
  p.lambda = c.model.lambda;
  p.alpha = c.model.alpha;
  if (c.model.V0) p.v0 = sample_potential(grid, *c.model.V0, "model.V0");
  for (std::size_t j = 0; j < c.model.V.size(); ++j) {
    p.v.push_back(sample_potential(grid, c.model.V[j], "model.V[" + std::to_string(j) + "]"));
  }
  if (c.control.K) {
    const auto& k = *c.control.K;
    p.admissible = in_section("control.K", [&] {
      return k.kind == "box" ? AdmissibleSet::box(k.lo, k.hi) : AdmissibleSet::ball(k.center, k.radius);
    });
    if (p.admissible->dimension() != p.controls()) {
      throw ConfigError("control.K", "dimension must equal the number of controls (" +
                                         std::to_string(p.controls()) + ")");
    }
  }
  in_section("model", [&] { p.validate(grid); });
  return p;
}

ComplexField build_initial(const RunConfig& c) {
  return in_section("initial", [&] { return sample_field(c, build_grid(c), c.initial, "initial"); });
}

std::optional<NoiseModel> build_noise(const RunConfig& c) {
  if (!c.noise) return std::nullopt;
  const SpatialGrid grid = build_grid(c);
  NoiseModel m;
  m.mu = c.noise->mu;
  m.conservative = c.noise->conservative;
  for (std::size_t j = 0; j < c.noise->profiles.size(); ++j) {
    const auto& p = c.noise->profiles[j];
    const std::string path = "noise.profiles[" + std::to_string(j) + "]";
    if (p.shape == "constant") {
      m.profiles.push_back(NoiseProfile::constant(p.value));
    } else {
      auto center = per_axis(p.center, grid.dimension(), path + ".center");
      for (auto& x : center) x += grid.center();
      m.profiles.push_back(in_section(path, [&] { return NoiseProfile::bump(p.amplitude, center, p.decay); }));
    }
  }
  in_section("noise", [&] { m.validate(grid.dimension()); });
  return m;
}

ControlPath build_control(const RunConfig& c, const ControlSpec& s) {
  const TimeGrid ct = build_control_time(c);
  const std::size_t m = c.model.V.size();
  ControlPath u = ControlPath::zeros(ct, m);
  if (s.shape == "constant") {
    if (!s.value.empty() && s.value.size() != m) {
      throw ConfigError("control", "constant control needs one value per channel (" + std::to_string(m) + ")");
    }
    if (!s.value.empty()) u = ControlPath::constant(ct, s.value);
  } else if (s.shape == "sine") {
    for (std::size_t k = 0; k < ct.nodes(); ++k) {
      for (std::size_t j = 0; j < m; ++j) {
        u.at(k, j) = s.amplitude * std::sin(s.frequency * ct.time(k) + s.phase + static_cast<double>(j));
      }
    }
  } else {
    u = in_section("control", [&] { return io::read_control_csv(resolve(c, s.path)); });
    if (!(u.time == ct) || u.channels != m) {
      throw ConfigError("control", s.path + " does not match control.nodes / channel count");
    }
  }
  const ModelParams p = build_params(c);
  if (p.admissible) u = project_K(u, *p.admissible);
  return u;
}

OptimizerOptions build_optimizer(const RunConfig& c) {
  OptimizerOptions o;
  o.method = c.optimizer.method == "pgd" ? OptimizerMethod::pgd : OptimizerMethod::fixed_point;
  o.theta = c.optimizer.theta;
  o.tol = c.optimizer.tol;
  o.max_iter = c.optimizer.max_iter;
  if (!(o.theta > 0.0 && o.theta <= 1.0)) throw ConfigError("optimizer.theta", "must lie in (0, 1]");
  if (!(o.tol >= 0.0)) throw ConfigError("optimizer.tol", "must be non-negative");
  if (o.method == OptimizerMethod::fixed_point && c.weights.gamma3 != 0.0) {
    throw ConfigError("optimizer.method", "fixed-point iteration requires weights.gamma3 = 0");
  }
  if (o.method == OptimizerMethod::fixed_point && !c.control.K) {
    throw ConfigError("control.K", "fixed-point iteration needs an admissible set");
  }
  return o;
}

AdjointMode build_adjoint_mode(const RunConfig& c) {
  return c.adjoint.mode == "continuous" ? AdjointMode::continuous : AdjointMode::discrete_adjoint;
}

std::vector<std::uint64_t> path_seeds(const RunConfig& c) {
  std::vector<std::uint64_t> seeds;
  if (!c.noise) return seeds;
  for (std::size_t i = 0; i < c.mc.paths; ++i) seeds.push_back(derive_seed(c.mc.base_seed, i));
  return seeds;
}

void validate(const RunConfig& c) {
  build_grid(c);
  build_time(c);
  build_control_time(c);
  build_params(c);
  const auto noise = build_noise(c);
  if (noise && c.mc.paths == 0) throw ConfigError("mc.paths", "must be at least 1 when noise is configured");
  in_section("weights", [&] { c.weights.validate(); });
  build_optimizer(c);
  if (c.adjoint.truncation && !(*c.adjoint.truncation > 0.0)) {
    throw ConfigError("adjoint.truncation", "must be positive");
  }
  if (c.adjoint.mode == "continuous" && noise && !noise->constant_profiles()) {
    throw ConfigError("adjoint.mode", "continuous mode needs constant noise profiles");
  }
  if (!(c.gradcheck.epsilon > 0.0)) throw ConfigError("gradcheck.epsilon", "must be positive");
  if (!(c.diagnose.p > 1.0)) throw ConfigError("diagnose.p", "must exceed 1");
  if (c.stability.levels == 0) throw ConfigError("stability.levels", "must be at least 1");
}

namespace {

ComplexField target_terminal(const RunConfig& c, const TargetSpec& t, const ComplexField& x0,
                             const ModelParams& params, const TimeGrid& time,
                             const std::optional<NoiseModel>& noise, ForwardOptions fo);

Trajectory run_target(const RunConfig& c, const TargetSpec& t, const ComplexField& x0,
                      const ModelParams& params, const TimeGrid& time,
                      const std::optional<NoiseModel>& noise, const ForwardOptions& fo) {
  const ControlPath u = t.kind == "controlled-run"
                            ? build_control(c, *t.control)
                            : ControlPath::zeros(build_control_time(c), params.controls());
  std::optional<PhaseField> phase;
  if (noise) phase.emplace(x0.grid, *noise, sample_path(*noise, time.final_time, time.steps, *t.seed));
  return solve_forward(x0, params, u, time, phase ? &*phase : nullptr, fo);
}

ComplexField target_terminal(const RunConfig& c, const TargetSpec& t, const ComplexField& x0,
                             const ModelParams& params, const TimeGrid& time,
                             const std::optional<NoiseModel>& noise, ForwardOptions fo) {
  if (t.kind == "zero") return ComplexField(x0.grid);
  if (t.kind == "analytic") return sample_field(c, x0.grid, *t.field, "targets.terminal.field");
  if (t.kind == "file") {
    FieldSpec file;
    file.shape = "file";
    file.path = t.path;
    return sample_field(c, x0.grid, file, "targets.terminal");
  }
  fo.stride = time.steps;
  return run_target(c, t, x0, params, time, noise, fo).fields.back();
}

Trajectory target_tracking(const RunConfig& c, const TargetSpec& t, const ComplexField& x0,
                           const ModelParams& params, const TimeGrid& time,
                           const std::optional<NoiseModel>& noise, const ForwardOptions& fo) {
  if (t.kind == "uncontrolled-run" || t.kind == "controlled-run") {
    return run_target(c, t, x0, params, time, noise, fo);
  }
  if (t.kind == "file") {
    auto traj = io::read_trajectory_binary(resolve(c, t.path));
    if (!(traj.grid == x0.grid) || !(traj.time == time) || !traj.dense()) {
      throw ConfigError("targets.tracking.path", "dump must be dense on the configured grids");
    }
    return traj;
  }
  const ComplexField f = t.kind == "zero" ? ComplexField(x0.grid)
                                          : sample_field(c, x0.grid, *t.field, "targets.tracking.field");
  Trajectory traj(x0.grid);
  traj.time = time;
  traj.node_index = Trajectory::stored_nodes(time.steps, 1);
  traj.fields.assign(time.nodes(), f);
  return traj;
}

}  // namespace

ControlProblem build_problem(const RunConfig& c) {
  validate(c);
  const TimeGrid time = build_time(c);
  const ModelParams params = build_params(c);
  const auto noise = build_noise(c);
  const ComplexField x0 = build_initial(c);
  ForwardOptions fo;
  fo.blowup_threshold = c.time.blowup_threshold;

  ControlProblem problem{x0, params, time, build_control_time(c),
                         TargetData{target_terminal(c, c.targets.terminal, x0, params, time, noise, fo),
                                    std::nullopt},
                         c.weights, std::nullopt, {}, {}, AdjointMode::discrete_adjoint, std::nullopt};
  if (c.weights.gamma1 > 0.0) {
    problem.targets.tracking = target_tracking(c, c.targets.tracking, x0, params, time, noise, fo);
  }
  if (noise) {
    problem.noise = noise;
    problem.seeds = path_seeds(c);
    for (auto seed : problem.seeds) {
      problem.paths.push_back(sample_path(*noise, time.final_time, time.steps, seed));
    }
  }
  problem.adjoint_mode = build_adjoint_mode(c);
  if (c.adjoint.truncation) problem.trunc = TruncationLevel{*c.adjoint.truncation};
  in_section("<problem>", [&] { problem.validate(); });
  return problem;
}

}  // namespace nlsctl::cli
