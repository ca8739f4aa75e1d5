#include "sysmat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sysmat/error.hpp"

namespace sysmat::io {

namespace {

double entry(const Json& v, const std::string& field, std::size_t k) {
  const std::string where = field + "[" + std::to_string(k) + "]";
  if (v.is_string()) {
    // JSON has no NaN or infinity literal; accept the usual spellings only to
    // reject them with a precise message
    const std::string s = v.get<std::string>();
    const double parsed = std::strtod(s.c_str(), nullptr);
    if (!std::isfinite(parsed)) throw Error(Errc::non_finite, where + ": non-finite entry " + s);
    throw Error(Errc::parse_error, where + ": expected a number");
  }
  if (!v.is_number()) throw Error(Errc::parse_error, where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(Errc::non_finite, where + ": non-finite entry");
  return d;
}

Index count(const Json& j, const char* field) {
  if (!j.contains(field)) throw Error(Errc::parse_error, std::string("missing field \"") + field + "\"");
  const Json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw Error(Errc::parse_error, std::string("field \"") + field + "\": expected a count");
  return static_cast<Index>(v.get<long long>());
}

void check_schema(const Json& j) {
  if (!j.is_object()) throw Error(Errc::parse_error, "top level must be an object");
  if (!j.contains("schema") || j.at("schema") != kSchema)
    throw Error(Errc::parse_error, "field \"schema\": expected 1");
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json arr = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) arr.push_back({m(i, k).real(), m(i, k).imag()});
  return arr;
}

ComplexMatrix matrix_from_json(const Json& obj, const std::string& field, Index rows, Index cols) {
  if (!obj.contains(field)) throw Error(Errc::parse_error, "missing field \"" + field + "\"");
  const Json& arr = obj.at(field);
  if (!arr.is_array()) throw Error(Errc::parse_error, field + ": expected an array");
  if (arr.size() != static_cast<std::size_t>(rows * cols))
    throw Error(Errc::dimension_mismatch, field + ": expected " + std::to_string(rows * cols) +
                                              " entries, found " + std::to_string(arr.size()));
  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const Json& e = arr[k];
    double re = 0.0, im = 0.0;
    if (e.is_array()) {
      if (e.size() != 2)
        throw Error(Errc::parse_error, field + "[" + std::to_string(k) + "]: expected [re, im]");
      re = entry(e[0], field, k);
      im = entry(e[1], field, k);
    } else {
      re = entry(e, field, k);
    }
    m(static_cast<Index>(k) / cols, static_cast<Index>(k) % cols) = Complex(re, im);
  }
  return m;
}

Json quadruple_to_json(const SystemQuadruple& q) {
  Json j;
  j["schema"] = kSchema;
  j["d"] = q.state_dim();
  j["m"] = q.outputs();
  j["n"] = q.inputs();
  j["A0"] = matrix_to_json(q.a().l0());
  j["A1"] = matrix_to_json(q.a().l1());
  j["B0"] = matrix_to_json(q.b().l0());
  j["B1"] = matrix_to_json(q.b().l1());
  j["C0"] = matrix_to_json(q.c().l0());
  j["C1"] = matrix_to_json(q.c().l1());
  j["D0"] = matrix_to_json(q.d().l0());
  j["D1"] = matrix_to_json(q.d().l1());
  return j;
}

SystemQuadruple quadruple_from_json(const Json& j) {
  check_schema(j);
  const Index d = count(j, "d");
  const Index m = count(j, "m");
  const Index n = count(j, "n");
  auto pencil = [&](const char* name, Index rows, Index cols) {
    const std::string s(name);
    return Pencil(matrix_from_json(j, s + "0", rows, cols), matrix_from_json(j, s + "1", rows, cols));
  };
  return SystemQuadruple(pencil("A", d, d), pencil("B", d, n), pencil("C", m, d),
                         pencil("D", m, n));
}

Json pencil_to_json(const Pencil& p) {
  Json j;
  j["schema"] = kSchema;
  j["rows"] = p.rows();
  j["cols"] = p.cols();
  j["L0"] = matrix_to_json(p.l0());
  j["L1"] = matrix_to_json(p.l1());
  return j;
}

Pencil pencil_from_json(const Json& j) {
  check_schema(j);
  const Index rows = count(j, "rows");
  const Index cols = count(j, "cols");
  return {matrix_from_json(j, "L0", rows, cols), matrix_from_json(j, "L1", rows, cols)};
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::parse_error, source + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path);
  out << text;
}

SystemQuadruple parse_quadruple(const std::string& path) {
  return quadruple_from_json(parse_json(read_file(path), path));
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sysmat::io
