#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "aif/genmodel.hpp"

namespace aif {

/// Current version written into every model file.
inline constexpr int kModelFormatVersion = 1;

/// Builds a model from a parsed document. Checks the schema and that the
/// declared dims agree with the payloads; throws ParseError naming the field.
/// Probabilistic invariants are left to validate().
GenerativeModel model_from_json(const nlohmann::json& doc);

/// Serialises every present array. Omitted C/D/E/pA/pB/pD stay omitted.
nlohmann::json model_to_json(const GenerativeModel& model);

/// Reads and parses a model file without validating it.
GenerativeModel read_model_file(const std::filesystem::path& path);

/// Reads, parses and validates. Throws ParseError or ValidationError.
GenerativeModel load_model(const std::filesystem::path& path);

/// Writes the model as a pretty-printed document with one matrix row per line.
void save_model(const GenerativeModel& model, const std::filesystem::path& path);
std::string dump_model(const GenerativeModel& model);

}  // namespace aif
