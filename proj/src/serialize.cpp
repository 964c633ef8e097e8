#include "hmt/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace hmt {

using nlohmann::json;

namespace {

void append_number(std::string& out, double v) {
  if (!std::isfinite(v)) throw std::domain_error("cannot serialize a non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_array(std::string& out, std::span<const double> values) {
  out += '[';
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    append_number(out, values[i]);
  }
  out += ']';
}

void append_indices(std::string& out, std::span<const Index> values) {
  out += '[';
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  out += ']';
}

void append_matrix(std::string& out, const Matrix& m) {
  out += "{\"shape\":[" + std::to_string(m.rows()) + "," + std::to_string(m.cols()) + "],\"data\":";
  append_array(out, std::span<const double>(m.data(), static_cast<size_t>(m.size())));
  out += '}';
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::vector<Index> read_indices(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an integer list");
  std::vector<Index> out;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ParseError(where + "[" + std::to_string(i) + "]: expected an integer");
    out.push_back(j[i].get<Index>());
  }
  return out;
}

std::vector<double> read_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a number list");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(where + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

Matrix matrix_from(const json& j, const std::string& where) {
  const auto shape = read_indices(field(j, "shape", where), where + ".shape");
  if (shape.size() != 2 || shape[0] < 0 || shape[1] < 0) throw ParseError(where + ".shape: expected [rows, cols]");
  const auto data = read_numbers(field(j, "data", where), where + ".data");
  if (static_cast<Index>(data.size()) != shape[0] * shape[1])
    throw ParseError(where + ".data: expected " + std::to_string(shape[0] * shape[1]) + " values");
  Matrix m(shape[0], shape[1]);
  std::copy(data.begin(), data.end(), m.data());
  return m;
}

}  // namespace

std::string write_matrix(const Matrix& m) {
  std::string out;
  append_matrix(out, m);
  return out;
}

Matrix read_matrix(std::string_view text) { return matrix_from(parse_json(text), "matrix"); }

std::string write_tensor(const DenseTensor& t) {
  std::string out = "{\"shape\":";
  append_indices(out, t.shape());
  out += ",\"data\":";
  append_array(out, t.data());
  out += '}';
  return out;
}

DenseTensor read_tensor(std::string_view text) {
  const json j = parse_json(text);
  const auto shape = read_indices(field(j, "shape", "tensor"), "tensor.shape");
  auto data = read_numbers(field(j, "data", "tensor"), "tensor.data");
  try {
    return DenseTensor(shape, std::move(data));
  } catch (const DimensionError& e) {
    throw ParseError(std::string("tensor: ") + e.what());
  }
}

std::string write_point(const PointFile& p) {
  std::string out = "{\"manifold\":\"" + to_string(p.shape.kind) + "\",\"dims\":";
  append_indices(out, p.shape.dims);
  out += ",\"ranks\":";
  append_indices(out, p.shape.ranks);
  out += ",\"k\":";
  std::vector<Index> ks;
  for (const auto& m : p.modes) ks.push_back(m.k());
  append_indices(out, ks);
  out += ",\"modes\":[";
  for (size_t i = 0; i < p.modes.size(); ++i) {
    if (i) out += ',';
    out += "{\"perm\":";
    append_indices(out, p.modes[i].perm.image);
    out += ",\"g11\":";
    append_matrix(out, p.modes[i].g11);
    out += ",\"g21\":";
    append_matrix(out, p.modes[i].g21);
    out += '}';
  }
  out += "]}\n";
  return out;
}

PointFile read_point(std::string_view text) {
  const json j = parse_json(text);
  PointFile p;
  const json& kind = field(j, "manifold", "point");
  if (!kind.is_string()) throw ParseError("point.manifold: expected a string");
  try {
    p.shape.kind = parse_manifold(kind.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("point.manifold: ") + e.what());
  }
  p.shape.dims = read_indices(field(j, "dims", "point"), "point.dims");
  p.shape.ranks = read_indices(field(j, "ranks", "point"), "point.ranks");
  QuotientStructure q;
  try {
    q = p.shape.structure();
  } catch (const std::exception& e) {
    throw ParseError(std::string("point: invalid shape: ") + e.what());
  }
  if (j.contains("k") && read_indices(j["k"], "point.k") != q.ks) throw ParseError("point.k: does not match the shape");
  const json& modes = field(j, "modes", "point");
  if (!modes.is_array() || static_cast<Index>(modes.size()) != q.order())
    throw ParseError("point.modes: expected one entry per mode");
  for (size_t i = 0; i < modes.size(); ++i) {
    const std::string where = "point.modes[" + std::to_string(i) + "]";
    ModeBlocks b;
    b.perm.image = read_indices(field(modes[i], "perm", where), where + ".perm");
    b.g11 = matrix_from(field(modes[i], "g11", where), where + ".g11");
    b.g21 = matrix_from(field(modes[i], "g21", where), where + ".g21");
    if (b.perm.size() != q.dims[i]) throw ParseError(where + ".perm: wrong length");
    try {
      b.perm.validate();
    } catch (const DimensionError& e) {
      throw ParseError(where + ".perm: " + e.what());
    }
    if (b.g11.rows() != q.ks[i] || b.g11.cols() != q.ks[i]) throw ParseError(where + ".g11: wrong size");
    if (b.g21.rows() != q.dims[i] - q.ks[i] || b.g21.cols() != q.ks[i]) throw ParseError(where + ".g21: wrong size");
    p.modes.push_back(std::move(b));
  }
  return p;
}

std::string write_tangent(const TangentFile& x) {
  std::string out = "{\"manifold\":\"" + to_string(x.kind) + "\",\"modes\":[";
  for (size_t i = 0; i < x.tangent.modes.size(); ++i) {
    if (i) out += ',';
    out += "{\"x11\":";
    append_matrix(out, x.tangent.modes[i].x11);
    out += ",\"x21\":";
    append_matrix(out, x.tangent.modes[i].x21);
    out += ",\"gamma12\":";
    append_matrix(out, x.tangent.modes[i].gamma12);
    out += '}';
  }
  out += "]}\n";
  return out;
}

TangentFile read_tangent(std::string_view text, const PointFile& point) {
  const json j = parse_json(text);
  TangentFile x;
  const json& kind = field(j, "manifold", "tangent");
  if (!kind.is_string()) throw ParseError("tangent.manifold: expected a string");
  try {
    x.kind = parse_manifold(kind.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("tangent.manifold: ") + e.what());
  }
  if (x.kind != point.shape.kind) throw ParseError("tangent.manifold: does not match the point");
  const json& modes = field(j, "modes", "tangent");
  if (!modes.is_array() || modes.size() != point.modes.size())
    throw ParseError("tangent.modes: expected one entry per mode");
  FlopLedger scratch;
  for (size_t i = 0; i < modes.size(); ++i) {
    const std::string where = "tangent.modes[" + std::to_string(i) + "]";
    const ModeBlocks& b = point.modes[i];
    HorizontalBlocks h;
    h.x11 = matrix_from(field(modes[i], "x11", where), where + ".x11");
    h.x21 = matrix_from(field(modes[i], "x21", where), where + ".x21");
    if (h.x11.rows() != b.k() || h.x11.cols() != b.k()) throw ParseError(where + ".x11: wrong size");
    if (h.x21.rows() != b.n() - b.k() || h.x21.cols() != b.k()) throw ParseError(where + ".x21: wrong size");
    if (modes[i].contains("gamma12")) {
      h.gamma12 = matrix_from(modes[i]["gamma12"], where + ".gamma12");
      if (h.gamma12.rows() != b.k() || h.gamma12.cols() != b.n() - b.k())
        throw ParseError(where + ".gamma12: wrong size");
    } else {
      h.gamma12 = gamma12(b, scratch);
    }
    x.tangent.modes.push_back(std::move(h));
  }
  return x;
}

}  // namespace hmt
