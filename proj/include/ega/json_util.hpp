#pragma once

#include <json.hpp>

#include "ega/types.hpp"

namespace ega {

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& doc);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& doc);

// FNV-1a over a string, hex-encoded; used for config/codebook hashes.
std::string fnv1a_hex(const std::string& text);

}  // namespace ega
