#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tcut/spectral.hpp"
#include "tcut/switching.hpp"

namespace tcut::app {

/// Raw bytes, digest and parsed form of an input file.
struct InputDocument {
  std::string path;
  std::string text;
  std::string sha256;
  nlohmann::json json;
};

/// Thrown for unreadable or malformed input; `what()` carries line:column
/// for syntax errors and a JSON pointer for structural ones.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& bytes);

InputDocument load_document(const std::filesystem::path& path);

/// {"matrix": [[...], ...]}
SystemMatrix matrix_from_document(const InputDocument& doc);

/// {"regimes": [{"label", "matrix", "m", "M"?}, ...]}
SwitchedSystem system_from_document(const InputDocument& doc);

}  // namespace tcut::app
