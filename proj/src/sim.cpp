#include "aif/sim.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "aif/model_io.hpp"

namespace aif {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

/// Failure inside the simulation loop, tagged with the step it happened at.
class StepError : public Error {
 public:
  StepError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

std::string render_action(const Action& action) {
  std::string out = "[";
  for (std::size_t i = 0; i < action.size(); ++i) out += (i ? "," : "") + std::to_string(action[i]);
  return out + "]";
}

std::string check_distribution(const json& node, const std::string& name) {
  if (!node.is_array() || node.empty()) return name + " must be a non-empty array";
  double total = 0.0;
  for (const auto& x : node) {
    if (!x.is_number()) return name + " has a non-numeric entry";
    const double v = x.get<double>();
    if (v < 0.0) return name + " has a negative entry";
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) return name + " sums to " + std::to_string(total);
  return {};
}

}  // namespace

ordered_json to_json(const TraceRecord& record) {
  ordered_json out;
  out["t"] = record.t;
  out["obs"] = record.obs;
  out["qs"] = record.qs;
  out["vfe"] = record.vfe;
  out["q_pi"] = record.q_pi;
  out["G"] = record.G;
  ordered_json components = ordered_json::array();
  for (const auto& efe : record.efe_components) {
    components.push_back({{"utility", efe.utility},
                          {"state_info_gain", efe.state_info_gain},
                          {"pA_info_gain", efe.pA_info_gain},
                          {"pB_info_gain", efe.pB_info_gain}});
  }
  out["efe_components"] = std::move(components);
  out["action"] = record.action;
  out["wall_clock_ms"] = record.wall_clock_ms;
  return out;
}

std::string check_trace_record(const json& line) {
  static const char* fields[] = {"t", "obs", "qs", "vfe", "q_pi", "G", "efe_components", "action", "wall_clock_ms"};
  if (!line.is_object()) return "record is not an object";
  for (const char* name : fields) {
    if (!line.contains(name)) return std::string("missing field ") + name;
  }
  if (!line["qs"].is_array() || line["qs"].empty()) return "qs must be a non-empty array";
  for (std::size_t f = 0; f < line["qs"].size(); ++f) {
    std::string problem = check_distribution(line["qs"][f], "qs[" + std::to_string(f) + "]");
    if (!problem.empty()) return problem;
  }
  std::string problem = check_distribution(line["q_pi"], "q_pi");
  if (!problem.empty()) return problem;
  if (line["G"].size() != line["q_pi"].size() || line["efe_components"].size() != line["q_pi"].size()) {
    return "G, efe_components and q_pi differ in length";
  }
  if (!line["vfe"].is_number() || !std::isfinite(line["vfe"].get<double>())) return "vfe is not finite";
  return {};
}

AgentOptions agent_options(const RunConfig& config) {
  AgentOptions opts;
  opts.policy_len = config.policy_len;
  opts.efe = config.efe;
  opts.gamma = config.gamma;
  opts.alpha = config.alpha;
  opts.action_selection = config.stochastic_actions ? ActionSelection::Stochastic : ActionSelection::Deterministic;
  opts.learn_A.lr = config.lr;
  opts.learn_B.lr = config.lr;
  opts.learn_D.lr = config.lr;
  opts.seed = config.agent_seed;
  return opts;
}

RunSummary run_simulation(Agent& agent, Environment& env, const RunConfig& config, std::ostream& trace) {
  using clock = std::chrono::steady_clock;
  RunSummary summary;
  double vfe_total = 0.0;
  Action action;
  for (std::size_t t = 0; t < config.steps; ++t) {
    const auto started = clock::now();
    TraceRecord record;
    try {
      record.t = t;
      record.obs = t == 0 ? env.reset() : env.step(action);
      record.qs = agent.infer_states(record.obs);
      record.vfe = agent.vfe();
      if (config.learn_A) agent.update_A();
      if (config.learn_B && t > 0) agent.update_B();
      const PolicyPosterior& posterior = agent.infer_policies();
      record.q_pi = posterior.q_pi;
      record.G = posterior.G;
      record.efe_components = posterior.breakdown;
      action = agent.sample_action();
      record.action = action;
      if (!std::isfinite(record.vfe)) throw NumericalError("free energy is not finite");
    } catch (const StepError&) {
      throw;
    } catch (const std::exception& e) {
      throw StepError(t, e.what());
    }
    if (config.record_timing) {
      record.wall_clock_ms = std::chrono::duration<double, std::milli>(clock::now() - started).count();
    }
    trace << to_json(record).dump() << '\n';
    vfe_total += record.vfe;
    ++summary.action_histogram[render_action(record.action)];
    ++summary.steps;
  }
  if (config.learn_D && config.steps > 0) {
    try {
      agent.update_D();
    } catch (const std::exception& e) {
      throw StepError(config.steps, e.what());
    }
  }
  summary.mean_vfe = summary.steps ? vfe_total / static_cast<double>(summary.steps) : 0.0;
  return summary;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Agent> agent;
  std::unique_ptr<Environment> env;
  try {
    GenerativeModel model = load_model(config.model_path);
    if (config.learn_A && !model.pA) throw Error("learning not enabled for A: model has no pA");
    if (config.learn_B && !model.pB) throw Error("learning not enabled for B: model has no pB");
    if (config.learn_D && !model.pD) throw Error("learning not enabled for D: model has no pD");
    env = make_environment(config.env, config.env_seed);
    if (env->num_obs() != model.num_obs()) throw Error("environment outcome counts do not match the model's A arrays");
    if (env->num_controls() != model.num_controls()) throw Error("environment control counts do not match the model's B arrays");
    agent = std::make_unique<Agent>(std::move(model), agent_options(config));
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what();
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  std::ofstream trace(config.out);
  if (!trace) {
    err << "error: cannot open trace file '" << config.out.string() << "'\n";
    return kExitInvalidInput;
  }
  RunSummary summary;
  try {
    summary = run_simulation(*agent, *env, config, trace);
  } catch (const StepError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  trace.flush();
  if (!trace) {
    err << "error: failed writing trace file '" << config.out.string() << "'\n";
    return kExitNumerical;
  }

  out << "steps: " << summary.steps << '\n';
  out << "mean_vfe: " << summary.mean_vfe << '\n';
  out << "actions:";
  for (const auto& [action, count] : summary.action_histogram) out << ' ' << action << '=' << count;
  out << '\n';
  return kExitOk;
}

int validate_command(const std::filesystem::path& model_path, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::exists(model_path)) {
    err << "error: model file '" << model_path.string() << "' does not exist\n";
    return kExitInvalidInput;
  }
  GenerativeModel model;
  try {
    model = read_model_file(model_path);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  const ValidationReport report = validate(model);
  if (!report.ok()) {
    out << report.to_string();
    return kExitInvalidInput;
  }
  out << "ok: " << model.num_modalities() << " modalities, " << model.num_factors() << " factors\n";
  return kExitOk;
}

}  // namespace aif
