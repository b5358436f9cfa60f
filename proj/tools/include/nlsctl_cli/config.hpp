#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsctl/adjoint.hpp"
#include "nlsctl/control_path.hpp"
#include "nlsctl/forward.hpp"
#include "nlsctl/noise.hpp"
#include "nlsctl/objective.hpp"
#include "nlsctl/optimize.hpp"

namespace nlsctl::cli {

using Json = nlohmann::json;

/// Schema violation. `path()` is the dotted location of the offending key,
/// e.g. "weights.gamma4" or "model.V[1].width".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Real potential shapes. gaussian: a exp(-|x-c|^2/w^2); cosine:
/// a cos(k.(x - x_c) + phase) with x_c the box center; constant: a.
struct PotentialSpec {
  std::string shape = "constant";
  double amplitude = 0.0;
  std::vector<double> center;      // offset from the box center (gaussian)
  double width = 1.0;              // gaussian
  std::vector<double> wavenumber;  // cosine
  double phase = 0.0;              // cosine
};

/// Complex field shapes: "gaussian" wave packet a exp(-|x-c|^2/w^2) e^{i p.x},
/// "zero", or "file" (last stored node of a binary trajectory dump).
struct FieldSpec {
  std::string shape = "gaussian";
  double amplitude = 1.0;
  std::vector<double> center;
  double width = 1.0;
  std::vector<double> momentum;
  std::string path;
};

/// Control shapes on the control nodes: "constant" (one value per channel),
/// "sine" (amplitude sin(frequency t + phase + j)), or "file" (control CSV).
struct ControlSpec {
  std::string shape = "constant";
  std::vector<double> value;
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
  std::string path;
};

struct NoiseProfileSpec {
  std::string shape = "constant";
  double value = 1.0;              // constant
  double amplitude = 1.0;          // bump
  std::vector<double> center;      // bump, offset from the box center
  double decay = 2.0;              // bump
};

struct NoiseSpec {
  std::vector<Complex> mu;
  std::vector<NoiseProfileSpec> profiles;
  bool conservative = true;
};

struct AdmissibleSpec {
  std::string kind = "box";  // box | ball
  std::vector<double> lo, hi;
  std::vector<double> center;
  double radius = 1.0;
};

/// Target kinds: "uncontrolled-run", "controlled-run" (with `control`),
/// "analytic" (with `field`, constant in time), "file", "zero".
struct TargetSpec {
  std::string kind = "uncontrolled-run";
  std::optional<ControlSpec> control;
  std::optional<FieldSpec> field;
  std::string path;
  std::optional<std::uint64_t> seed;  // noise path for run-based targets
};

struct RunConfig {
  struct {
    int d = 1;
    std::size_t n = 64;
    double L = 16.0;
  } grid;
  struct {
    int lambda = -1;
    double alpha = 3.0;
    std::optional<PotentialSpec> V0;
    std::vector<PotentialSpec> V;
  } model;
  FieldSpec initial;
  std::optional<NoiseSpec> noise;
  struct {
    double T = 1.0;
    std::size_t M = 200;
    std::size_t stride = 1;
    double blowup_threshold = 1e8;
  } time;
  struct {
    std::size_t nodes = 20;
    std::optional<AdmissibleSpec> K;
    ControlSpec u0;
  } control;
  ObjectiveWeights weights;
  struct {
    TargetSpec terminal;
    TargetSpec tracking;
  } targets;
  struct {
    std::size_t paths = 0;
    std::uint64_t base_seed = 0;
  } mc;
  struct {
    std::string method = "pgd";
    double theta = 0.5;
    double tol = 1e-4;
    std::size_t max_iter = 200;
    // Re-optimize every Monte-Carlo path on its own and report the gap to
    // the common deterministic control. Costs one extra run per path.
    bool per_path_gap = false;
  } optimizer;
  struct {
    std::string mode = "discrete-adjoint";
    std::optional<double> truncation;
  } adjoint;
  struct {
    double epsilon = 1e-3;
  } gradcheck;
  struct {
    double p = 2.0;
    std::string source = "forward";  // forward | file
    std::string path;
    bool include_adjoint = true;
  } diagnose;
  struct {
    std::size_t levels = 5;
    ControlSpec control_direction;
    double path_scale = 1.0;
    std::optional<std::uint64_t> path_seed;
  } stability;

  /// Directory of the config file; relative "file" paths resolve against it.
  std::filesystem::path base_dir;
};

RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& file);
/// Effective config with every default filled in; parse_config(to_json(c))
/// reproduces `c`.
Json to_json(const RunConfig& config);
/// 16 hex digits of FNV-1a 64 over the canonical dump of to_json(config).
std::string config_hash(const RunConfig& config);

/// Re-checks every physical invariant by building the core objects; throws
/// ConfigError with the offending path.
void validate(const RunConfig& config);

// Builders from config to core objects.
SpatialGrid build_grid(const RunConfig& config);
TimeGrid build_time(const RunConfig& config);
TimeGrid build_control_time(const RunConfig& config);
ModelParams build_params(const RunConfig& config);
ComplexField build_initial(const RunConfig& config);
std::optional<NoiseModel> build_noise(const RunConfig& config);
ControlPath build_control(const RunConfig& config, const ControlSpec& spec);
OptimizerOptions build_optimizer(const RunConfig& config);
AdjointMode build_adjoint_mode(const RunConfig& config);

/// Seeds of the Monte-Carlo paths (empty when the run is deterministic).
std::vector<std::uint64_t> path_seeds(const RunConfig& config);
/// Full control problem: targets materialized, paths sampled.
ControlProblem build_problem(const RunConfig& config);

}  // namespace nlsctl::cli
