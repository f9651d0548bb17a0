#include "input.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tcut::app {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail(const InputDocument& doc, const std::string& pointer, const std::string& msg) {
  throw InputError(doc.path + ": " + (pointer.empty() ? "/" : pointer) + ": " + msg);
}

double number_at(const InputDocument& doc, const json& v, const std::string& pointer) {
  if (!v.is_number()) fail(doc, pointer, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(doc, pointer, "number is not finite");
  return x;
}

Matrix matrix_at(const InputDocument& doc, const json& v, const std::string& pointer) {
  if (!v.is_array() || v.empty()) fail(doc, pointer, "expected a non-empty array of rows");
  const auto d = static_cast<Eigen::Index>(v.size());
  Matrix m(d, d);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rowPtr = pointer + "/" + std::to_string(i);
    const json& row = v[i];
    if (!row.is_array()) fail(doc, rowPtr, "expected an array of numbers");
    if (row.size() != v.size()) {
      fail(doc, rowPtr,
           "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(v.size()));
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          number_at(doc, row[j], rowPtr + "/" + std::to_string(j));
    }
  }
  return m;
}

const json& member(const InputDocument& doc, const json& obj, const std::string& pointer,
                   const char* key) {
  if (!obj.is_object()) fail(doc, pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(doc, pointer, std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

InputDocument load_document(const std::filesystem::path& path) {
  InputDocument doc;
  doc.path = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(doc.path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  doc.text = buf.str();
  doc.sha256 = sha256_hex(doc.text);
  try {
    doc.json = json::parse(doc.text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(doc.text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    // Drop nlohmann's own "[json.exception...] parse error at line L, column C: " prefix.
    if (const auto pos = what.find(": ", what.find("column")); pos != std::string::npos) {
      what = what.substr(pos + 2);
    }
    throw InputError(doc.path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
  return doc;
}

SystemMatrix matrix_from_document(const InputDocument& doc) {
  return SystemMatrix(matrix_at(doc, member(doc, doc.json, "", "matrix"), "/matrix"));
}

SwitchedSystem system_from_document(const InputDocument& doc) {
  const json& regs = member(doc, doc.json, "", "regimes");
  if (!regs.is_array() || regs.empty()) fail(doc, "/regimes", "expected a non-empty array");
  std::vector<Regime> out;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    const std::string ptr = "/regimes/" + std::to_string(i);
    const json& r = regs[i];
    Regime reg{.label = "", .matrix = SystemMatrix(Matrix::Constant(1, 1, -1.0))};
    const json& label = member(doc, r, ptr, "label");
    if (!label.is_string()) fail(doc, ptr + "/label", "expected a string");
    reg.label = label.get<std::string>();
    reg.matrix = SystemMatrix(matrix_at(doc, member(doc, r, ptr, "matrix"), ptr + "/matrix"));
    reg.dwell = number_at(doc, member(doc, r, ptr, "m"), ptr + "/m");
    if (auto it = r.find("M"); it != r.end() && !it->is_null()) {
      reg.upper = number_at(doc, *it, ptr + "/M");
    } else {
      reg.upper = std::numeric_limits<double>::infinity();
    }
    out.push_back(std::move(reg));
  }
  return SwitchedSystem(std::move(out));
}

}  // namespace tcut::app
