#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "aif/agent.hpp"
#include "aif/envs.hpp"
#include "aif/inference.hpp"
#include "aif/learning.hpp"
#include "aif/maths.hpp"
#include "aif/model_io.hpp"
#include "aif/sim.hpp"

namespace py = pybind11;
using namespace aif;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.dims().begin(), t.dims().end());
  py::array_t<double> out(shape);
  std::copy(t.values().begin(), t.values().end(), out.mutable_data());
  return out;
}

Tensor from_numpy(const Array& a) {
  std::vector<std::size_t> dims(a.shape(), a.shape() + a.ndim());
  return Tensor(std::move(dims), std::vector<double>(a.data(), a.data() + a.size()));
}

py::list tensors_to_list(const std::vector<Tensor>& ts) {
  py::list out;
  for (const auto& t : ts) out.append(to_numpy(t));
  return out;
}

std::vector<Tensor> tensors_from_list(const std::vector<Array>& arrays) {
  std::vector<Tensor> out;
  for (const auto& a : arrays) out.push_back(from_numpy(a));
  return out;
}

Vector vector_from(const Array& a) {
  if (a.ndim() != 1) throw ShapeError("expected a 1-D array, got " + std::to_string(a.ndim()) + " dims");
  return Vector(a.data(), a.data() + a.size());
}

Belief belief_from(const std::vector<Array>& arrays) {
  Belief out;
  for (const auto& a : arrays) out.push_back(vector_from(a));
  return out;
}

py::list belief_to_list(const Belief& qs) {
  py::list out;
  for (const auto& q : qs) out.append(py::array_t<double>(static_cast<py::ssize_t>(q.size()), q.data()));
  return out;
}

std::vector<Policy> policies_from(const std::vector<std::vector<std::vector<std::size_t>>>& raw) {
  std::vector<Policy> out;
  for (const auto& steps : raw) out.push_back(Policy{steps});
  return out;
}

std::vector<std::vector<std::vector<std::size_t>>> policies_to(const std::vector<Policy>& policies) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  for (const auto& p : policies) out.push_back(p.steps);
  return out;
}

py::dict breakdown_dict(const EfeBreakdown& b) {
  py::dict d;
  d["utility"] = b.utility;
  d["state_info_gain"] = b.state_info_gain;
  d["pA_info_gain"] = b.pA_info_gain;
  d["pB_info_gain"] = b.pB_info_gain;
  d["total_G"] = b.total_G;
  return d;
}

py::dict posterior_dict(const PolicyPosterior& post) {
  py::dict d;
  d["q_pi"] = py::array_t<double>(static_cast<py::ssize_t>(post.q_pi.size()), post.q_pi.data());
  d["G"] = py::array_t<double>(static_cast<py::ssize_t>(post.G.size()), post.G.data());
  py::list parts;
  for (const auto& b : post.breakdown) parts.append(breakdown_dict(b));
  d["efe_components"] = parts;
  return d;
}

EfeFlags efe_flags(bool use_utility, bool use_states_info_gain, bool use_param_info_gain) {
  return {use_utility, use_states_info_gain, use_param_info_gain};
}

ActionSelection selection_from(const std::string& name) {
  if (name == "deterministic") return ActionSelection::Deterministic;
  if (name == "stochastic") return ActionSelection::Stochastic;
  throw Error("action_selection must be 'deterministic' or 'stochastic', got '" + name + "'");
}

LearningOptions learning(double lr, std::optional<std::vector<std::size_t>> targets) { return {lr, std::move(targets)}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete-state active inference: generative models, inference, planning and learning";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ShapeError>(m, "ShapeError", error.ptr());
  py::register_exception<IndexError>(m, "IndexError", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<StateError>(m, "StateError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());

  m.def("softmax", [](const Array& x) { return softmax(vector_from(x)); }, py::arg("logits"));
  m.def("entropy", [](const Array& p) { return entropy(vector_from(p)); }, py::arg("p"));
  m.def("log_stable", [](const Array& p) { return log_stable(vector_from(p)); }, py::arg("p"));

  py::class_<GenerativeModel>(m, "Model")
      .def(py::init<>())
      .def(py::init([](const std::vector<Array>& A, const std::vector<Array>& B, const std::vector<Array>& C,
                       const std::vector<Array>& D, const std::optional<Array>& E) {
             GenerativeModel model;
             model.A = tensors_from_list(A);
             model.B = tensors_from_list(B);
             model.C = tensors_from_list(C);
             model.D = belief_from(D);
             if (E) model.E = vector_from(*E);
             return model;
           }),
           py::arg("A"), py::arg("B"), py::arg("C") = std::vector<Array>{}, py::arg("D") = std::vector<Array>{},
           py::arg("E") = py::none())
      .def_property(
          "A", [](const GenerativeModel& g) { return tensors_to_list(g.A); },
          [](GenerativeModel& g, const std::vector<Array>& v) { g.A = tensors_from_list(v); })
      .def_property(
          "B", [](const GenerativeModel& g) { return tensors_to_list(g.B); },
          [](GenerativeModel& g, const std::vector<Array>& v) { g.B = tensors_from_list(v); })
      .def_property(
          "C", [](const GenerativeModel& g) { return tensors_to_list(g.C); },
          [](GenerativeModel& g, const std::vector<Array>& v) { g.C = tensors_from_list(v); })
      .def_property(
          "D", [](const GenerativeModel& g) { return belief_to_list(g.D); },
          [](GenerativeModel& g, const std::vector<Array>& v) { g.D = belief_from(v); })
      .def_property(
          "E",
          [](const GenerativeModel& g) -> py::object {
            if (!g.E) return py::none();
            return py::array_t<double>(static_cast<py::ssize_t>(g.E->size()), g.E->data());
          },
          [](GenerativeModel& g, const std::optional<Array>& v) {
            g.E = v ? std::optional<Vector>(vector_from(*v)) : std::nullopt;
          })
      .def_property(
          "pA", [](const GenerativeModel& g) -> py::object { return g.pA ? py::object(tensors_to_list(*g.pA)) : py::none(); },
          [](GenerativeModel& g, const std::optional<std::vector<Array>>& v) {
            g.pA = v ? std::optional(tensors_from_list(*v)) : std::nullopt;
          })
      .def_property(
          "pB", [](const GenerativeModel& g) -> py::object { return g.pB ? py::object(tensors_to_list(*g.pB)) : py::none(); },
          [](GenerativeModel& g, const std::optional<std::vector<Array>>& v) {
            g.pB = v ? std::optional(tensors_from_list(*v)) : std::nullopt;
          })
      .def_property(
          "pD", [](const GenerativeModel& g) -> py::object { return g.pD ? py::object(belief_to_list(*g.pD)) : py::none(); },
          [](GenerativeModel& g, const std::optional<std::vector<Array>>& v) {
            g.pD = v ? std::optional(belief_from(*v)) : std::nullopt;
          })
      .def_property_readonly("num_obs", &GenerativeModel::num_obs)
      .def_property_readonly("num_states", &GenerativeModel::num_states)
      .def_property_readonly("num_controls", &GenerativeModel::num_controls)
      .def("validate",
           [](const GenerativeModel& g) {
             std::vector<std::tuple<std::string, std::string, std::string>> out;
             for (const auto& v : validate(g).violations) out.emplace_back(v.array, v.index, v.message);
             return out;
           },
           "List of (array, index, message) violations; empty when the model is valid.")
      .def("to_json", [](const GenerativeModel& g) { return dump_model(g); })
      .def_static("from_json", [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); })
      .def("save", [](const GenerativeModel& g, const std::filesystem::path& path) { save_model(g, path); })
      .def_static("load", &load_model, py::arg("path"))
      .def(py::self == py::self);

  m.def("load_model", &load_model, py::arg("path"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));

  m.def(
      "construct_policies",
      [](const std::vector<std::size_t>& num_states, const std::vector<std::size_t>& num_controls, int policy_len,
         std::optional<std::vector<std::size_t>> controllable) {
        return policies_to(construct_policies(num_states, num_controls, policy_len, std::move(controllable)));
      },
      py::arg("num_states"), py::arg("num_controls"), py::arg("policy_len") = 1,
      py::arg("control_factors") = py::none(),
      "Every policy as a list of per-timestep actions.");

  m.def(
      "infer_states",
      [](const Observation& obs, const std::vector<Array>& A, const std::vector<Array>& prior, int num_iter,
         double dF_tol) {
        const FpiResult r = infer_states_fpi(obs, tensors_from_list(A), belief_from(prior), {num_iter, dF_tol});
        py::dict d;
        d["qs"] = belief_to_list(r.qs);
        d["vfe"] = r.vfe;
        d["vfe_history"] = r.vfe_history;
        d["sweeps"] = r.sweeps;
        return d;
      },
      py::arg("obs"), py::arg("A"), py::arg("prior"), py::arg("num_iter") = 10, py::arg("dF_tol") = 1e-4);

  m.def(
      "vfe",
      [](const std::vector<Array>& qs, const Observation& obs, const std::vector<Array>& A,
         const std::vector<Array>& prior) { return vfe(belief_from(qs), obs, tensors_from_list(A), belief_from(prior)); },
      py::arg("qs"), py::arg("obs"), py::arg("A"), py::arg("prior"));

  m.def(
      "update_posterior_policies",
      [](const std::vector<Array>& qs, const GenerativeModel& model,
         const std::vector<std::vector<std::vector<std::size_t>>>& policies, double gamma, bool use_utility,
         bool use_states_info_gain, bool use_param_info_gain) {
        return posterior_dict(update_posterior_policies(belief_from(qs), model, policies_from(policies),
                                                        efe_flags(use_utility, use_states_info_gain, use_param_info_gain),
                                                        gamma));
      },
      py::arg("qs"), py::arg("model"), py::arg("policies"), py::arg("gamma") = 16.0, py::arg("use_utility") = true,
      py::arg("use_states_info_gain") = true, py::arg("use_param_info_gain") = false);

  m.def(
      "sample_action",
      [](const Array& q_pi, const std::vector<std::vector<std::vector<std::size_t>>>& policies,
         const std::vector<std::size_t>& num_controls, const std::string& mode, double alpha, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return sample_action(vector_from(q_pi), policies_from(policies), num_controls, selection_from(mode), alpha, rng);
      },
      py::arg("q_pi"), py::arg("policies"), py::arg("num_controls"), py::arg("mode") = "deterministic",
      py::arg("alpha") = 16.0, py::arg("seed") = 0);

  m.def(
      "update_A",
      [](const std::vector<Array>& pA, const Observation& obs, const std::vector<Array>& qs, double lr) {
        return tensors_to_list(update_A_dirichlet(tensors_from_list(pA), obs, belief_from(qs), learning(lr, {})));
      },
      py::arg("pA"), py::arg("obs"), py::arg("qs"), py::arg("lr") = 1.0);
  m.def(
      "update_B",
      [](const std::vector<Array>& pB, const Action& action, const std::vector<Array>& qs,
         const std::vector<Array>& qs_prev, double lr) {
        return tensors_to_list(
            update_B_dirichlet(tensors_from_list(pB), action, belief_from(qs), belief_from(qs_prev), learning(lr, {})));
      },
      py::arg("pB"), py::arg("action"), py::arg("qs"), py::arg("qs_prev"), py::arg("lr") = 1.0);
  m.def(
      "update_D",
      [](const std::vector<Array>& pD, const std::vector<Array>& qs_first, double lr) {
        return belief_to_list(update_D_dirichlet(belief_from(pD), belief_from(qs_first), learning(lr, {})));
      },
      py::arg("pD"), py::arg("qs_first"), py::arg("lr") = 1.0);

  py::class_<Agent>(m, "Agent")
      .def(py::init([](GenerativeModel model, int policy_len, double gamma, double alpha, const std::string& mode,
                       bool use_utility, bool use_states_info_gain, bool use_param_info_gain, double lr,
                       std::uint64_t seed, int num_iter, double dF_tol) {
             AgentOptions opts;
             opts.policy_len = policy_len;
             opts.gamma = gamma;
             opts.alpha = alpha;
             opts.action_selection = selection_from(mode);
             opts.efe = efe_flags(use_utility, use_states_info_gain, use_param_info_gain);
             opts.learn_A.lr = lr;
             opts.learn_B.lr = lr;
             opts.learn_D.lr = lr;
             opts.seed = seed;
             opts.inference = {num_iter, dF_tol};
             return Agent(std::move(model), opts);
           }),
           py::arg("model"), py::arg("policy_len") = 1, py::arg("gamma") = 16.0, py::arg("alpha") = 16.0,
           py::arg("action_selection") = "deterministic", py::arg("use_utility") = true,
           py::arg("use_states_info_gain") = true, py::arg("use_param_info_gain") = false, py::arg("lr") = 1.0,
           py::arg("seed") = 0, py::arg("num_iter") = 10, py::arg("dF_tol") = 1e-4)
      .def("infer_states", [](Agent& a, const Observation& obs) { return belief_to_list(a.infer_states(obs)); },
           py::arg("obs"))
      .def("infer_policies", [](Agent& a) { return posterior_dict(a.infer_policies()); })
      .def("sample_action", &Agent::sample_action)
      .def("update_A", [](Agent& a) { return tensors_to_list(a.update_A()); })
      .def("update_B", [](Agent& a) { return tensors_to_list(a.update_B()); })
      .def("update_D", [](Agent& a) { return belief_to_list(a.update_D()); })
      .def("reset", &Agent::reset)
      .def_property_readonly("model", &Agent::model)
      .def_property_readonly("policies", [](const Agent& a) { return policies_to(a.policies()); })
      .def_property_readonly("qs", [](const Agent& a) { return belief_to_list(a.qs()); })
      .def_property_readonly("vfe", &Agent::vfe)
      .def_property_readonly("t", &Agent::t)
      .def_property_readonly("action", &Agent::action_index);

  py::class_<Environment>(m, "Environment")
      .def("reset", &Environment::reset)
      .def("step", &Environment::step, py::arg("action"))
      .def_property_readonly("num_obs", &Environment::num_obs)
      .def_property_readonly("num_controls", &Environment::num_controls);
  py::class_<Listing2Env, Environment>(m, "Listing2Env")
      .def(py::init<std::uint64_t>(), py::arg("seed") = 0)
      .def_property_readonly("state", &Listing2Env::state);
  py::class_<EpistemicChamberEnv, Environment>(m, "EpistemicChamberEnv")
      .def(py::init<std::uint64_t>(), py::arg("seed") = 0)
      .def_property_readonly("site", &EpistemicChamberEnv::site)
      .def_property_readonly("coin", &EpistemicChamberEnv::coin)
      .def_static("matching_model", &EpistemicChamberEnv::matching_model);
  py::class_<TabularEnv, Environment>(m, "TabularEnv")
      .def(py::init<GenerativeModel, std::uint64_t>(), py::arg("process"), py::arg("seed") = 0)
      .def_property_readonly("state", &TabularEnv::state);
  m.def("make_environment", &make_environment, py::arg("name"), py::arg("seed") = 0);

  m.def(
      "run",
      [](Agent& agent, Environment& env, std::size_t steps, bool learn_A, bool learn_B, bool learn_D) {
        RunConfig config;
        config.steps = steps;
        config.learn_A = learn_A;
        config.learn_B = learn_B;
        config.learn_D = learn_D;
        std::ostringstream trace;
        run_simulation(agent, env, config, trace);
        py::list records;
        std::istringstream lines(trace.str());
        const py::object loads = py::module_::import("json").attr("loads");
        for (std::string line; std::getline(lines, line);) records.append(loads(line));
        return records;
      },
      py::arg("agent"), py::arg("env"), py::arg("steps"), py::arg("learn_A") = false, py::arg("learn_B") = false,
      py::arg("learn_D") = false, "Runs the perceive-plan-act loop and returns one trace record per step.");

#define AIF_STR_(x) #x
#define AIF_STR(x) AIF_STR_(x)
  m.attr("__version__") = AIF_STR(VERSION_INFO);
}
