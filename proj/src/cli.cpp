#include "bmc/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bmc/camera_depth.hpp"
#include "bmc/feasibility_projection.hpp"
#include "bmc/grad_check.hpp"
#include "bmc/limits.hpp"
#include "bmc/losses.hpp"
#include "bmc/pose_io.hpp"

namespace bmc::cli {

using nlohmann::json;

namespace {

// Settings shared by every subcommand. Values come from flags first, then
// from the --config file, then from the defaults below.
struct RunConfig {
  std::string config_path;
  std::string input;
  std::string output;
  std::string limits_path;
  std::string weights_path;
  std::string source = "fit";
  std::string length_unit = "m";
  double quantile = 0.0;
  double feasibility_threshold = 1e-12;
  bool lenient = false;
  bool left_hand = false;
  std::uint64_t seed = 0;
  LossWeights weights;
  ProjectionConfig projection;
  std::vector<double> camera;
  std::vector<int> reference = {ReferencePair{}.a, ReferencePair{}.b};
  GradCheckOptions grad;

  DegeneracyMode mode() const {
    return lenient ? DegeneracyMode::Lenient : DegeneracyMode::Strict;
  }
};

template <typename T>
void take(const json& cfg, const char* key, const CLI::Option* flag, T& target,
          const std::string& prefix = "") {
  if (flag != nullptr && flag->count() > 0) {
    return;
  }
  const auto it = cfg.find(key);
  if (it == cfg.end()) {
    return;
  }
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::SchemaError, "config." + prefix + key + ": wrong type");
  }
}

LossWeights weights_from_json(const json& w, const std::string& where) {
  if (!w.is_object()) {
    throw Error(ErrorKind::SchemaError, where + ": expected an object");
  }
  LossWeights out;
  take(w, "bone_length", nullptr, out.bone_length, "weights.");
  take(w, "root_bone", nullptr, out.root_bone, "weights.");
  take(w, "angle", nullptr, out.angle, "weights.");
  take(w, "keypoints_2d", nullptr, out.keypoints_2d, "weights.");
  take(w, "relative_depth", nullptr, out.relative_depth, "weights.");
  take(w, "root_depth", nullptr, out.root_depth, "weights.");
  out.validate();
  return out;
}

class Command {
 public:
  Command(CLI::App& app, const char* name, const char* description)
      : sub_(app.add_subcommand(name, description)) {
    opt("--config", cfg_.config_path, "JSON config file; flags take precedence")
        ->check(CLI::ExistingFile);
  }

  CLI::App* app() { return sub_; }
  RunConfig& cfg() { return cfg_; }

  template <typename T>
  CLI::Option* opt(const std::string& name, T& target, const std::string& help) {
    return remember(sub_->add_option(name, target, help));
  }
  CLI::Option* flag(const std::string& name, bool& target, const std::string& help) {
    return remember(sub_->add_flag(name, target, help));
  }

  // Fills unset values from the config file.
  void merge_config() {
    if (cfg_.config_path.empty()) {
      return;
    }
    const json doc = read_json_file(cfg_.config_path);
    if (!doc.is_object()) {
      throw Error(ErrorKind::SchemaError, "config: expected a JSON object");
    }
    RunConfig& c = cfg_;
    take(doc, "input", find("--input"), c.input);
    take(doc, "out", find("--out"), c.output);
    take(doc, "limits", find("--limits"), c.limits_path);
    take(doc, "quantile", find("--quantile"), c.quantile);
    take(doc, "source", find("--source"), c.source);
    take(doc, "length_unit", find("--length-unit"), c.length_unit);
    take(doc, "feasibility_threshold", find("--feasibility-threshold"),
         c.feasibility_threshold);
    take(doc, "lenient", find("--lenient"), c.lenient);
    take(doc, "left_hand", find("--left-hand"), c.left_hand);
    take(doc, "seed", find("--seed"), c.seed);
    take(doc, "camera", find("--camera"), c.camera);
    take(doc, "reference", find("--reference"), c.reference);
    if (const auto it = doc.find("weights"); it != doc.end() && cfg_.weights_path.empty()) {
      c.weights = weights_from_json(*it, "config.weights");
    }
    if (const auto it = doc.find("projection"); it != doc.end()) {
      if (!it->is_object()) {
        throw Error(ErrorKind::SchemaError, "config.projection: expected an object");
      }
      const json& p = *it;
      ProjectionConfig& pc = c.projection;
      take(p, "max_iterations", find("--max-iterations"), pc.max_iterations, "projection.");
      take(p, "threshold", find("--threshold"), pc.threshold, "projection.");
      take(p, "anchor", find("--anchor"), pc.anchor, "projection.");
      take(p, "initial_step", find("--initial-step"), pc.initial_step, "projection.");
      take(p, "backtrack_factor", find("--backtrack-factor"), pc.backtrack_factor,
           "projection.");
      take(p, "sufficient_decrease", find("--sufficient-decrease"), pc.sufficient_decrease,
           "projection.");
      take(p, "max_backtracks", find("--max-backtracks"), pc.max_backtracks, "projection.");
    }
    if (const auto it = doc.find("grad_check"); it != doc.end()) {
      const json& g = *it;
      GradCheckOptions& gc = c.grad;
      take(g, "samples", find("--samples"), gc.samples, "grad_check.");
      take(g, "step", find("--step"), gc.step, "grad_check.");
      take(g, "tolerance", find("--tolerance"), gc.tolerance, "grad_check.");
      take(g, "scale", find("--scale"), gc.scale, "grad_check.");
      take(g, "min_margin", find("--min-margin"), gc.min_margin, "grad_check.");
    }
  }

  // Loads --weights if given.
  void load_weights() {
    if (!cfg_.weights_path.empty()) {
      cfg_.weights = weights_from_json(read_json_file(cfg_.weights_path), "weights");
    }
    cfg_.weights.validate();
  }

 private:
  CLI::Option* remember(CLI::Option* o) {
    for (const std::string& n : o->get_lnames()) {
      options_["--" + n] = o;
    }
    return o;
  }

  const CLI::Option* find(const std::string& name) const {
    const auto it = options_.find(name);
    return it == options_.end() ? nullptr : it->second;
  }

  CLI::App* sub_;
  RunConfig cfg_;
  std::map<std::string, CLI::Option*> options_;
};

void require(const std::string& value, const char* what) {
  if (value.empty()) {
    throw Error(ErrorKind::InvalidArgument, std::string("missing required setting: ") + what);
  }
}

json interval_json(const Interval& i) { return json::array({i.lower, i.upper}); }

json report_json(std::size_t sample, const LossReport& r, bool feasible) {
  json line;
  line["sample"] = sample;
  line["bone_length"] = r.bone_length;
  line["root_bone"] = r.root_bone;
  line["angle"] = r.angle;
  line["total"] = r.total;
  line["feasible"] = feasible;
  if (r.degenerate) {
    line["degenerate"] = r.degeneracy;
    return line;
  }
  json violated = json::object();
  const auto collect = [&](const char* name, const auto& values) {
    json items = json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] > 0.0) {
        items.push_back(json{{"index", i}, {"penalty", values[i]}});
      }
    }
    if (!items.empty()) {
      violated[name] = std::move(items);
    }
  };
  collect("bone_length", r.violations.bone_length);
  collect("curvature", r.violations.curvature);
  collect("angular_distance", r.violations.angular_distance);
  collect("angle", r.violations.angle);
  line["violations"] = std::move(violated);
  return line;
}

json terms_json(const LossReport& r) {
  return json{{"bone_length", r.bone_length},
              {"root_bone", r.root_bone},
              {"angle", r.angle},
              {"total", r.total}};
}

int fit_limits_command(RunConfig& c, std::ostream& out, std::ostream& err) {
  require(c.input, "input");
  require(c.output, "out");
  const std::vector<HandPose> poses = load_poses(c.input, {c.left_hand});
  FitOptions fit;
  fit.quantile = c.quantile;
  fit.mode = c.mode();
  fit.source = c.source;
  fit.length_unit = c.length_unit;
  const FitResult result = fit_limits(poses, fit);
  for (std::size_t s : result.skipped) {
    err << "warning: skipped degenerate sample " << s << '\n';
  }
  save_limits(result.limits, c.output);

  json summary;
  summary["samples"] = poses.size();
  summary["used"] = result.limits.metadata.sample_count;
  summary["skipped"] = result.skipped;
  json bl = json::array();
  for (const Interval& i : result.limits.bone_length) bl.push_back(interval_json(i));
  summary["bone_length"] = std::move(bl);
  json hulls = json::array();
  for (const AngleHull& h : result.limits.angle_hulls) hulls.push_back(h.area());
  summary["hull_area"] = std::move(hulls);
  summary["out"] = c.output;
  out << summary.dump() << '\n';
  return kExitOk;
}

int evaluate_command(RunConfig& c, std::ostream& out) {
  require(c.input, "input");
  require(c.limits_path, "limits");
  const std::vector<HandPose> poses = load_poses(c.input, {c.left_hand});
  const LimitSet limits = load_limits(c.limits_path);
  LossOptions opts;
  opts.mode = c.mode();
  bool all_feasible = true;
  for (std::size_t s = 0; s < poses.size(); ++s) {
    LossReport r;
    try {
      r = bmc_loss(poses[s], limits, c.weights, opts);
    } catch (const Error& e) {
      if (e.is_degeneracy()) {
        throw Error(e.kind(), e.what(), static_cast<int>(s));
      }
      throw;
    }
    const bool feasible = !r.degenerate && r.total < c.feasibility_threshold;
    all_feasible = all_feasible && feasible;
    out << report_json(s, r, feasible).dump() << '\n';
  }
  return all_feasible ? kExitOk : kExitViolation;
}

int project_command(RunConfig& c, std::ostream& out) {
  require(c.input, "input");
  require(c.limits_path, "limits");
  const std::vector<HandPose> poses = load_poses(c.input, {c.left_hand});
  const LimitSet limits = load_limits(c.limits_path);
  c.projection.loss.mode = DegeneracyMode::Lenient;
  c.projection.validate();
  std::vector<HandPose> projected;
  bool all_converged = true;
  for (std::size_t s = 0; s < poses.size(); ++s) {
    const ProjectionResult r = project_to_feasible(poses[s], limits, c.weights, c.projection);
    projected.push_back(r.pose);
    all_converged = all_converged && r.converged;
    json line;
    line["sample"] = s;
    line["input"] = pose_to_json(poses[s]);
    line["output"] = pose_to_json(r.pose);
    line["iterations"] = r.iterations;
    line["converged"] = r.converged;
    line["stalled"] = r.stalled;
    line["initial"] = r.trace.front();
    line["final"] = terms_json(r.final_report);
    out << line.dump() << '\n';
  }
  if (!c.output.empty()) {
    save_poses(projected, c.output);
  }
  return all_converged ? kExitOk : kExitNumericalFailure;
}

int solve_depth_command(RunConfig& c, std::ostream& out) {
  require(c.input, "input");
  if (c.camera.empty()) {
    throw Error(ErrorKind::InvalidArgument, "missing required setting: camera");
  }
  if (c.reference.size() != 2) {
    throw Error(ErrorKind::InvalidArgument, "reference needs two joint indices");
  }
  const CameraIntrinsics camera = CameraIntrinsics::from_row_major(c.camera);
  const ReferencePair ref{c.reference[0], c.reference[1]};
  const std::vector<TwoPointFiveD> samples = load_samples_25d(c.input);
  bool all_ok = true;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    json line;
    line["sample"] = s;
    try {
      line["zroot"] = solve_zroot(samples[s], camera, ref);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ComplexRoots && e.kind() != ErrorKind::NoPositiveRoot &&
          e.kind() != ErrorKind::DegenerateReference) {
        throw;
      }
      all_ok = false;
      line["error"] = to_string(e.kind());
      line["message"] = e.what();
    }
    out << line.dump() << '\n';
  }
  return all_ok ? kExitOk : kExitNumericalFailure;
}

int grad_check_command(RunConfig& c, std::ostream& out, const Hooks& hooks) {
  GradCheckOptions opts = c.grad;
  opts.seed = c.seed;
  opts.weights = c.weights;
  opts.gradient_hook = hooks.gradient_hook;
  const GradCheckResult r = run_grad_check(opts);
  json line;
  line["samples"] = r.checked;
  line["attempts"] = r.attempts;
  line["seed"] = opts.seed;
  line["max_relative_error"] = r.max_relative_error;
  line["worst_sample"] = r.worst_sample;
  line["tolerance"] = opts.tolerance;
  line["passed"] = r.passed;
  out << line.dump() << '\n';
  return r.passed ? kExitOk : kExitViolation;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoPositiveRoot:
    case ErrorKind::ComplexRoots:
      return kExitNumericalFailure;
    default:
      return kExitInputError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Hooks& hooks) {
  CLI::App app{"Biomechanical hand-pose constraints: fit limits, evaluate, project, "
               "recover depth"};
  app.name("bmc");
  app.require_subcommand(1);

  Command fit(app, "fit-limits", "Fit a limit file from a pose corpus");
  fit.opt("input,--input", fit.cfg().input, "Pose file");
  fit.opt("--out,-o", fit.cfg().output, "Limit file to write");
  fit.opt("--quantile", fit.cfg().quantile, "Trim quantile in [0, 0.5)");
  fit.opt("--source", fit.cfg().source, "Metadata source label");
  fit.opt("--length-unit", fit.cfg().length_unit, "Metadata length unit");
  fit.flag("--lenient", fit.cfg().lenient, "Skip degenerate samples instead of failing");
  fit.flag("--left-hand", fit.cfg().left_hand, "Mirror left-hand input");

  Command eval(app, "evaluate", "Evaluate the constraint losses of each pose");
  eval.opt("input,--input", eval.cfg().input, "Pose file");
  eval.opt("--limits", eval.cfg().limits_path, "Limit file");
  eval.opt("--weights", eval.cfg().weights_path, "JSON file with loss weights");
  eval.opt("--feasibility-threshold", eval.cfg().feasibility_threshold,
           "A pose is feasible when its total is below this");
  eval.flag("--lenient", eval.cfg().lenient, "Report degenerate poses instead of failing");
  eval.flag("--left-hand", eval.cfg().left_hand, "Mirror left-hand input");

  Command proj(app, "project", "Move each pose onto the feasible set");
  proj.opt("input,--input", proj.cfg().input, "Pose file");
  proj.opt("--limits", proj.cfg().limits_path, "Limit file");
  proj.opt("--weights", proj.cfg().weights_path, "JSON file with loss weights");
  proj.opt("--out,-o", proj.cfg().output, "Pose file for the projected poses");
  proj.opt("--max-iterations", proj.cfg().projection.max_iterations, "Iteration cap");
  proj.opt("--threshold", proj.cfg().projection.threshold, "Stop below this loss");
  proj.opt("--anchor", proj.cfg().projection.anchor, "Weight on |J - J_input|^2");
  proj.opt("--initial-step", proj.cfg().projection.initial_step, "Length of the first trial step");
  proj.opt("--backtrack-factor", proj.cfg().projection.backtrack_factor, "Step shrink factor");
  proj.opt("--sufficient-decrease", proj.cfg().projection.sufficient_decrease,
           "Armijo constant");
  proj.opt("--max-backtracks", proj.cfg().projection.max_backtracks,
           "Backtracking steps per iteration");
  proj.flag("--left-hand", proj.cfg().left_hand, "Mirror left-hand input");

  Command depth(app, "solve-depth", "Recover the root depth of 2.5D samples");
  depth.opt("input,--input", depth.cfg().input, "2.5D sample file");
  depth.opt("--camera", depth.cfg().camera, "Intrinsic matrix, 9 numbers row-major")
      ->expected(9);
  depth.opt("--reference", depth.cfg().reference, "Reference joint pair (two indices)")
      ->expected(2);

  Command grad(app, "grad-check", "Compare analytic gradients with finite differences");
  grad.opt("--samples", grad.cfg().grad.samples, "Number of poses");
  grad.opt("--seed", grad.cfg().seed, "Random seed");
  grad.opt("--step", grad.cfg().grad.step, "Central-difference step");
  grad.opt("--tolerance", grad.cfg().grad.tolerance, "Maximum relative error");
  grad.opt("--scale", grad.cfg().grad.scale, "Length scale of generated hands");
  grad.opt("--min-margin", grad.cfg().grad.min_margin, "Minimum distance from kinks");
  grad.opt("--weights", grad.cfg().weights_path, "JSON file with loss weights");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    for (Command* c : {&fit, &eval, &proj, &depth, &grad}) {
      if (!c->app()->parsed()) continue;
      c->merge_config();
      c->load_weights();
      RunConfig& cfg = c->cfg();
      if (c == &fit) return fit_limits_command(cfg, out, err);
      if (c == &eval) return evaluate_command(cfg, out);
      if (c == &proj) return project_command(cfg, out);
      if (c == &depth) return solve_depth_command(cfg, out);
      return grad_check_command(cfg, out, hooks);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
  return kExitInputError;
}

}  // namespace bmc::cli
