#include "aif/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace aif {

using nlohmann::json;

namespace {

std::string field(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string element(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

void flatten(const json& node, const std::string& path, std::size_t depth, const std::vector<std::size_t>& dims,
             std::vector<double>& out) {
  if (depth == dims.size()) {
    if (!node.is_number()) throw ParseError(path, "expected a number");
    out.push_back(node.get<double>());
    return;
  }
  if (!node.is_array()) throw ParseError(path, "expected an array of length " + std::to_string(dims[depth]));
  if (node.size() != dims[depth]) {
    throw ParseError(path, "ragged array: expected length " + std::to_string(dims[depth]) + ", got " +
                               std::to_string(node.size()));
  }
  for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], element(path, i), depth + 1, dims, out);
}

/// Nested arrays -> Tensor, with the shape read off the first element at each depth.
Tensor parse_tensor(const json& node, const std::string& path) {
  std::vector<std::size_t> dims;
  const json* probe = &node;
  while (probe->is_array()) {
    if (probe->empty()) throw ParseError(path, "empty array");
    dims.push_back(probe->size());
    probe = &(*probe)[0];
  }
  if (dims.empty()) throw ParseError(path, "expected an array");
  std::vector<double> values;
  values.reserve(product(dims));
  flatten(node, path, 0, dims, values);
  return Tensor(std::move(dims), std::move(values));
}

Vector parse_vector(const json& node, const std::string& path) {
  Tensor t = parse_tensor(node, path);
  if (t.rank() != 1) throw ParseError(path, "expected a flat array, got dims " + dims_to_string(t.dims()));
  return {t.values().begin(), t.values().end()};
}

std::vector<std::size_t> parse_dims(const json& node, const std::string& path) {
  if (!node.is_array()) throw ParseError(path, "expected an array of positive integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number_unsigned() || node[i].get<std::size_t>() == 0) {
      throw ParseError(element(path, i), "expected a positive integer");
    }
    out.push_back(node[i].get<std::size_t>());
  }
  return out;
}

const json& require(const json& doc, const std::string& key, const std::string& parent = "") {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(field(parent, key), "missing required field");
  return *it;
}

const json& require_list(const json& doc, const std::string& key, std::size_t count) {
  const json& node = require(doc, key);
  if (!node.is_array() || node.size() != count) {
    throw ParseError(key, "expected a list of " + std::to_string(count) + " arrays");
  }
  return node;
}

void expect_dims(const Tensor& t, const std::vector<std::size_t>& expected, const std::string& path) {
  if (t.dims() != expected) {
    throw ParseError(path, "payload dims " + dims_to_string(t.dims()) + " do not match declared dims " +
                               dims_to_string(expected));
  }
}

std::vector<std::vector<std::string>> parse_name_lists(const json& node, const std::string& path) {
  if (!node.is_array()) throw ParseError(path, "expected a list of name lists");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_array()) throw ParseError(element(path, i), "expected a list of names");
    std::vector<std::string> names;
    for (std::size_t j = 0; j < node[i].size(); ++j) {
      if (!node[i][j].is_string()) throw ParseError(element(element(path, i), j), "expected a string");
      names.push_back(node[i][j].get<std::string>());
    }
    out.push_back(std::move(names));
  }
  return out;
}

std::vector<std::string> parse_names(const json& node, const std::string& path) {
  if (!node.is_array()) throw ParseError(path, "expected a list of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_string()) throw ParseError(element(path, i), "expected a string");
    out.push_back(node[i].get<std::string>());
  }
  return out;
}

Labels parse_labels(const json& node) {
  if (!node.is_object()) throw ParseError("labels", "expected an object");
  Labels labels;
  for (const auto& [key, value] : node.items()) {
    const std::string path = field("labels", key);
    if (key == "modalities") {
      labels.modalities = parse_names(value, path);
    } else if (key == "factors") {
      labels.factors = parse_names(value, path);
    } else if (key == "outcomes") {
      labels.outcomes = parse_name_lists(value, path);
    } else if (key == "states") {
      labels.states = parse_name_lists(value, path);
    } else {
      throw ParseError(path, "unknown field");
    }
  }
  return labels;
}

}  // namespace

GenerativeModel model_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("", "model document must be an object");
  static const std::vector<std::string> known = {"format_version", "dims", "A",  "B",  "C",     "D",
                                                 "E",              "pA",   "pB", "pD", "labels"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ParseError(key, "unknown field");
  }

  const json& version = require(doc, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
    throw ParseError("format_version", "unsupported version (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  const json& dims = require(doc, "dims");
  if (!dims.is_object()) throw ParseError("dims", "expected an object");
  const auto num_obs = parse_dims(require(dims, "num_obs", "dims"), "dims.num_obs");
  const auto num_states = parse_dims(require(dims, "num_states", "dims"), "dims.num_states");
  const auto num_controls = parse_dims(require(dims, "num_controls", "dims"), "dims.num_controls");
  if (num_obs.empty()) throw ParseError("dims.num_obs", "at least one modality required");
  if (num_states.empty()) throw ParseError("dims.num_states", "at least one factor required");
  if (num_controls.size() != num_states.size()) {
    throw ParseError("dims.num_controls", "expected one entry per factor (" + std::to_string(num_states.size()) + ")");
  }
  const std::size_t n_mod = num_obs.size();
  const std::size_t n_fac = num_states.size();

  GenerativeModel model;

  const json& a_node = require_list(doc, "A", n_mod);
  for (std::size_t m = 0; m < n_mod; ++m) {
    Tensor a = parse_tensor(a_node[m], element("A", m));
    std::vector<std::size_t> expected{num_obs[m]};
    expected.insert(expected.end(), num_states.begin(), num_states.end());
    expect_dims(a, expected, element("A", m));
    model.A.push_back(std::move(a));
  }

  const json& b_node = require_list(doc, "B", n_fac);
  for (std::size_t f = 0; f < n_fac; ++f) {
    Tensor b = parse_tensor(b_node[f], element("B", f));
    expect_dims(b, {num_states[f], num_states[f], num_controls[f]}, element("B", f));
    model.B.push_back(std::move(b));
  }

  if (doc.contains("C")) {
    const json& c_node = require_list(doc, "C", n_mod);
    for (std::size_t m = 0; m < n_mod; ++m) {
      Tensor c = parse_tensor(c_node[m], element("C", m));
      const bool ok = (c.rank() == 1 && c.dim(0) == num_obs[m]) || (c.rank() == 2 && c.dim(1) == num_obs[m]);
      if (!ok) {
        throw ParseError(element("C", m), "payload dims " + dims_to_string(c.dims()) + " must be " +
                                              std::to_string(num_obs[m]) + " or T x " + std::to_string(num_obs[m]));
      }
      model.C.push_back(std::move(c));
    }
  }

  if (doc.contains("D")) {
    const json& d_node = require_list(doc, "D", n_fac);
    for (std::size_t f = 0; f < n_fac; ++f) {
      Vector d = parse_vector(d_node[f], element("D", f));
      if (d.size() != num_states[f]) {
        throw ParseError(element("D", f), "length " + std::to_string(d.size()) + " does not match declared " +
                                              std::to_string(num_states[f]) + " states");
      }
      model.D.push_back(std::move(d));
    }
  }

  if (doc.contains("E")) model.E = parse_vector(doc["E"], "E");

  if (doc.contains("pA")) {
    const json& node = require_list(doc, "pA", n_mod);
    model.pA.emplace();
    for (std::size_t m = 0; m < n_mod; ++m) {
      Tensor t = parse_tensor(node[m], element("pA", m));
      expect_dims(t, model.A[m].dims(), element("pA", m));
      model.pA->push_back(std::move(t));
    }
  }
  if (doc.contains("pB")) {
    const json& node = require_list(doc, "pB", n_fac);
    model.pB.emplace();
    for (std::size_t f = 0; f < n_fac; ++f) {
      Tensor t = parse_tensor(node[f], element("pB", f));
      expect_dims(t, model.B[f].dims(), element("pB", f));
      model.pB->push_back(std::move(t));
    }
  }
  if (doc.contains("pD")) {
    const json& node = require_list(doc, "pD", n_fac);
    model.pD.emplace();
    for (std::size_t f = 0; f < n_fac; ++f) {
      Vector d = parse_vector(node[f], element("pD", f));
      if (d.size() != num_states[f]) throw ParseError(element("pD", f), "length does not match declared states");
      model.pD->push_back(std::move(d));
    }
  }

  if (doc.contains("labels")) model.labels = parse_labels(doc["labels"]);
  return model;
}

namespace {

json tensor_to_json(std::span<const double> values, std::span<const std::size_t> dims) {
  if (dims.size() == 1) return json(std::vector<double>(values.begin(), values.end()));
  const std::size_t stride = product(dims.subspan(1));
  json out = json::array();
  for (std::size_t i = 0; i < dims[0]; ++i) out.push_back(tensor_to_json(values.subspan(i * stride, stride), dims.subspan(1)));
  return out;
}

json tensor_to_json(const Tensor& t) { return tensor_to_json(t.values(), t.dims()); }

/// Pretty printer that keeps innermost numeric arrays on one line.
void emit(const json& node, int indent, std::ostream& os) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (node.is_object()) {
    if (node.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : node.items()) {
      os << inner << json(key).dump() << ": ";
      emit(value, indent + 2, os);
      os << (++i < node.size() ? ",\n" : "\n");
    }
    os << pad << '}';
    return;
  }
  if (node.is_array()) {
    const bool flat = std::none_of(node.begin(), node.end(), [](const json& x) { return x.is_structured(); });
    if (flat) {
      os << '[';
      for (std::size_t i = 0; i < node.size(); ++i) os << (i ? ", " : "") << node[i].dump();
      os << ']';
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < node.size(); ++i) {
      os << inner;
      emit(node[i], indent + 2, os);
      os << (i + 1 < node.size() ? ",\n" : "\n");
    }
    os << pad << ']';
    return;
  }
  os << node.dump();
}

}  // namespace

json model_to_json(const GenerativeModel& model) {
  // Keys come out sorted.
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["dims"] = {{"num_obs", model.num_obs()}, {"num_states", model.num_states()}, {"num_controls", model.num_controls()}};
  auto tensors = [](const std::vector<Tensor>& ts) {
    json out = json::array();
    for (const auto& t : ts) out.push_back(tensor_to_json(t));
    return out;
  };
  doc["A"] = tensors(model.A);
  doc["B"] = tensors(model.B);
  if (!model.C.empty()) doc["C"] = tensors(model.C);
  if (!model.D.empty()) doc["D"] = model.D;
  if (model.E) doc["E"] = *model.E;
  if (model.pA) doc["pA"] = tensors(*model.pA);
  if (model.pB) doc["pB"] = tensors(*model.pB);
  if (model.pD) doc["pD"] = *model.pD;
  if (!model.labels.empty()) {
    json labels = json::object();
    if (!model.labels.modalities.empty()) labels["modalities"] = model.labels.modalities;
    if (!model.labels.factors.empty()) labels["factors"] = model.labels.factors;
    if (!model.labels.outcomes.empty()) labels["outcomes"] = model.labels.outcomes;
    if (!model.labels.states.empty()) labels["states"] = model.labels.states;
    doc["labels"] = std::move(labels);
  }
  return doc;
}

std::string dump_model(const GenerativeModel& model) {
  std::ostringstream os;
  emit(model_to_json(model), 0, os);
  os << '\n';
  return os.str();
}

GenerativeModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open model file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("", "malformed document in '" + path.string() + "': " + e.what());
  }
  return model_from_json(doc);
}

GenerativeModel load_model(const std::filesystem::path& path) {
  GenerativeModel model = read_model_file(path);
  ValidationReport report = validate(model);
  if (!report.ok()) throw ValidationError(std::move(report));
  return model;
}

void save_model(const GenerativeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file '" + path.string() + "'");
  out << dump_model(model);
  if (!out) throw Error("failed writing model file '" + path.string() + "'");
}

}  // namespace aif
