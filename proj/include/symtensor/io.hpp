#pragma once

// File formats.
//
// Tensor JSON:  {"field": "real"|"complex", "shape": [n_1, .., n_d], "data": [..]}
//   data is row-major; complex entries are [re, im] pairs, real entries plain numbers.
//
// Binary form text:
//   [b1_re b1_im b2_re b2_im      optional basis block: two lines, one basis
//    c1_re c1_im c2_re c2_im]     vector per line (components (y1, y2))]
//   d
//   re im                         d + 1 coefficient lines, the k-th one holding
//   ..                            the coefficient of t1^(d-k) t2^k
// Blank lines and lines starting with '#' are ignored.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symtensor/binary_form.hpp"
#include "symtensor/tensor.hpp"

namespace symtensor::io {

using json = nlohmann::json;

namespace detail {

inline Field parse_field(const json& j) {
  if (!j.is_string()) throw ParseError("\"field\" must be a string");
  const auto s = j.get<std::string>();
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw ParseError("unknown field \"" + s + "\" (expected real or complex)");
}

inline Scalar parse_scalar(const json& j, Field field, const std::string& where) {
  if (j.is_number()) return Scalar(j.get<double>(), 0.0);
  if (field == Field::complex && j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Scalar(j[0].get<double>(), j[1].get<double>());
  }
  throw ParseError(where + ": expected " +
                   std::string(field == Field::real ? "a number" : "a number or [re, im] pair"));
}

inline json scalar_json(Scalar v, Field field) {
  if (field == Field::real) return v.real();
  return json::array({v.real(), v.imag()});
}

// 1-based line and column of a byte offset.
inline std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& source = "<input>") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + detail::line_context(text, e.byte) + ": " + e.what());
  }
}

inline Tensor tensor_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("tensor must be a JSON object");
  for (const char* key : {"field", "shape", "data"}) {
    if (!j.contains(key)) throw ParseError(std::string("tensor is missing \"") + key + "\"");
  }
  const Field field = detail::parse_field(j["field"]);
  const auto& js = j["shape"];
  if (!js.is_array() || js.empty()) throw ParseError("\"shape\" must be a non-empty array");
  Shape shape;
  for (const auto& n : js) {
    if (!n.is_number_integer() || n.get<long long>() < 1) throw ParseError("shape entries must be positive integers");
    shape.push_back(n.get<std::size_t>());
  }
  const auto& jd = j["data"];
  if (!jd.is_array()) throw ParseError("\"data\" must be an array");
  std::vector<Scalar> data;
  data.reserve(jd.size());
  for (std::size_t i = 0; i < jd.size(); ++i) {
    data.push_back(detail::parse_scalar(jd[i], field, "data[" + std::to_string(i) + "]"));
  }
  try {
    return Tensor(field, shape, std::move(data));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid tensor: ") + e.what());
  }
}

inline json to_json(const Tensor& t) {
  json data = json::array();
  for (const auto& v : t.data()) data.push_back(detail::scalar_json(v, t.field()));
  return json{{"field", to_string(t.field())}, {"shape", t.shape()}, {"data", std::move(data)}};
}

inline Vector vector_from_json(const json& j, Field field, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": vector must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = detail::parse_scalar(j[i], field, where + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline json to_json(const Vector& v, Field field) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(detail::scalar_json(v[i], field));
  return out;
}

inline json to_json(std::span<const Vector> vs, Field field) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v, field));
  return out;
}

inline Tensor read_tensor_file(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return tensor_from_json(parse_json_text(text, path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

/// 64-bit FNV-1a digest, as 16 hex digits.
inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

inline BinaryForm parse_binary_form(const std::string& text, const std::string& source = "<form>") {
  struct Line {
    std::size_t number;
    std::vector<double> values;
  };
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        line.values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(source + ": line " + std::to_string(number) + ": not a number: " + tok);
      }
    }
    lines.push_back(std::move(line));
  }
  auto fail = [&](std::size_t line, const std::string& what) -> ParseError {
    return ParseError(source + ": line " + std::to_string(line) + ": " + what);
  };
  if (lines.empty()) throw ParseError(source + ": empty binary form file");

  std::size_t pos = 0;
  Matrix2 basis = Matrix2::Identity();
  if (lines[0].values.size() == 4) {
    if (lines.size() < 2 || lines[1].values.size() != 4) {
      throw fail(lines[0].number, "basis block needs two lines of four numbers");
    }
    for (int col = 0; col < 2; ++col) {
      const auto& v = lines[static_cast<std::size_t>(col)].values;
      basis(0, col) = Scalar(v[0], v[1]);
      basis(1, col) = Scalar(v[2], v[3]);
    }
    pos = 2;
  }
  if (pos >= lines.size() || lines[pos].values.size() != 1) {
    throw fail(pos < lines.size() ? lines[pos].number : number, "expected the degree on its own line");
  }
  const double dval = lines[pos].values[0];
  if (dval < 1 || dval != static_cast<double>(static_cast<std::size_t>(dval))) {
    throw fail(lines[pos].number, "degree must be a positive integer");
  }
  const auto degree = static_cast<std::size_t>(dval);
  ++pos;
  std::vector<Scalar> coeffs;
  for (std::size_t k = 0; k <= degree; ++k, ++pos) {
    if (pos >= lines.size()) throw fail(number, "expected " + std::to_string(degree + 1) + " coefficient lines");
    const auto& v = lines[pos].values;
    if (v.size() != 2) throw fail(lines[pos].number, "coefficient line must hold \"re im\"");
    coeffs.emplace_back(v[0], v[1]);
  }
  if (pos != lines.size()) throw fail(lines[pos].number, "unexpected trailing data");
  try {
    return BinaryForm(std::move(coeffs), basis);
  } catch (const Error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline std::string format_binary_form(const BinaryForm& f) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  if (!f.basis.isIdentity(0.0)) {
    for (int col = 0; col < 2; ++col) {
      ss << f.basis(0, col).real() << ' ' << f.basis(0, col).imag() << ' ' << f.basis(1, col).real() << ' '
         << f.basis(1, col).imag() << '\n';
    }
  }
  ss << f.degree << '\n';
  for (const auto& c : f.coeffs) ss << c.real() << ' ' << c.imag() << '\n';
  return ss.str();
}

}  // namespace symtensor::io
