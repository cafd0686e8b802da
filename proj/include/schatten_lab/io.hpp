#pragma once

// JSON exchange formats. Requires nlohmann/json on the include path.

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "schatten_lab/blockmat.hpp"
#include "schatten_lab/channel.hpp"
#include "schatten_lab/fuzz.hpp"
#include "schatten_lab/inequality.hpp"
#include "schatten_lab/matrix.hpp"
#include "schatten_lab/optimize.hpp"

namespace schatten_lab::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  throw LabError(ErrorCode::InvalidArgument, where + ": " + what);
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::size_t count_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 1) bad(where + "." + key, "expected a positive integer");
  return v.get<std::size_t>();
}

}  // namespace detail

/// {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.
inline json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const Complex& z : m.entries()) data.push_back({z.real(), z.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& where = "matrix") {
  const std::size_t rows = detail::count_field(j, "rows", where);
  const std::size_t cols = detail::count_field(j, "cols", where);
  const json& data = detail::field(j, "data", where);
  if (!data.is_array() || data.size() != rows * cols) {
    detail::bad(where + ".data", "expected an array of rows*cols = " + std::to_string(rows * cols) + " entries");
  }
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const json& e = data[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      detail::bad(where + ".data[" + std::to_string(i) + "]", "expected [re, im]");
    }
    entries.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

/// {"n", "X", "Y", "W"?, "Z"}; a missing "W" means a positive block.
using BlockInput = std::variant<PositiveBlock, GeneralBlock>;

inline json block_to_json(const PositiveBlock& b) {
  return {{"n", b.n()}, {"X", matrix_to_json(b.x().matrix())}, {"Y", matrix_to_json(b.y())},
          {"Z", matrix_to_json(b.z().matrix())}};
}

inline json block_to_json(const GeneralBlock& b) {
  return {{"n", b.n()}, {"X", matrix_to_json(b.x)}, {"Y", matrix_to_json(b.y)}, {"W", matrix_to_json(b.w)},
          {"Z", matrix_to_json(b.z)}};
}

inline BlockInput block_from_json(const json& j) {
  const std::size_t n = detail::count_field(j, "n", "block");
  ComplexMatrix x = matrix_from_json(detail::field(j, "X", "block"), "block.X");
  ComplexMatrix y = matrix_from_json(detail::field(j, "Y", "block"), "block.Y");
  ComplexMatrix z = matrix_from_json(detail::field(j, "Z", "block"), "block.Z");
  for (const ComplexMatrix* m : {&x, &y, &z})
    if (m->rows() != n || m->cols() != n) detail::bad("block", "blocks must be n x n with n = " + std::to_string(n));
  if (j.contains("W")) {
    ComplexMatrix w = matrix_from_json(j["W"], "block.W");
    if (w.rows() != n || w.cols() != n) detail::bad("block.W", "must be n x n");
    return GeneralBlock(std::move(x), std::move(y), std::move(w), std::move(z));
  }
  return PositiveBlock(PsdMatrix(x), y, PsdMatrix(z));
}

/// Exponents serialize as numbers, with the string "inf" for infinity.
inline json exponent_to_json(const SchattenExponent& p) {
  if (p.is_infinite()) return "inf";
  return p.value();
}

inline SchattenExponent exponent_from_json(const json& j, const std::string& where = "p") {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return SchattenExponent::infinity();
    detail::bad(where, "expected a number or \"inf\"");
  }
  if (!j.is_number()) detail::bad(where, "expected a number or \"inf\"");
  return SchattenExponent(j.get<double>());
}

/// Channel specs: depolarizing | werner_holevo | kraus | tensor.
inline KrausChannel channel_from_json(const json& j, const std::string& where = "channel") {
  const json& kind = detail::field(j, "kind", where);
  if (!kind.is_string()) detail::bad(where + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "depolarizing") {
    const json& l = detail::field(j, "lambda", where);
    if (!l.is_number()) detail::bad(where + ".lambda", "expected a number");
    return depolarizing(l.get<double>());
  }
  if (k == "werner_holevo") return werner_holevo(detail::count_field(j, "d", where));
  if (k == "kraus") {
    const json& ops = detail::field(j, "ops", where);
    if (!ops.is_array() || ops.empty()) detail::bad(where + ".ops", "expected a non-empty array of matrices");
    std::vector<ComplexMatrix> mats;
    for (std::size_t i = 0; i < ops.size(); ++i)
      mats.push_back(matrix_from_json(ops[i], where + ".ops[" + std::to_string(i) + "]"));
    return KrausChannel(std::move(mats));
  }
  if (k == "tensor") {
    const json& f = detail::field(j, "factors", where);
    if (!f.is_array() || f.size() != 2) detail::bad(where + ".factors", "expected exactly two channel specs");
    return tensor(channel_from_json(f[0], where + ".factors[0]"), channel_from_json(f[1], where + ".factors[1]"));
  }
  detail::bad(where + ".kind", "unknown channel kind \"" + k + "\"");
}

inline json record_to_json(const CheckRecord& r) {
  json j = {{"inequality_id", std::string(inequality_name(r.inequality_id))},
            {"p", exponent_to_json(r.p)},
            {"n", r.n},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"margin", r.margin},
            {"seed", r.seed},
            {"pass", r.pass},
            {"scale", r.scale}};
  if (r.error) j["error"] = *r.error;
  return j;
}

inline CheckRecord record_from_json(const json& j) {
  const std::string where = "record";
  CheckRecord r;
  r.inequality_id = parse_inequality_name(detail::field(j, "inequality_id", where).get<std::string>());
  r.p = exponent_from_json(detail::field(j, "p", where), where + ".p");
  r.n = detail::field(j, "n", where).get<std::size_t>();
  r.lhs = detail::field(j, "lhs", where).get<double>();
  r.rhs = detail::field(j, "rhs", where).get<double>();
  r.margin = detail::field(j, "margin", where).get<double>();
  r.seed = detail::field(j, "seed", where).get<std::uint64_t>();
  r.pass = detail::field(j, "pass", where).get<bool>();
  r.scale = detail::field(j, "scale", where).get<double>();
  if (j.contains("error")) r.error = j["error"].get<std::string>();
  return r;
}

inline json summary_to_json(const FuzzSummary& s) {
  json grid = json::array();
  for (const auto& p : s.p_grid) grid.push_back(exponent_to_json(p));
  auto finite_or_null = [](double x) -> json { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"inequality_id", s.inequality_id},
          {"trials", s.trials},
          {"records", s.records},
          {"failures", s.failures},
          {"errors", s.errors},
          {"min_margin", finite_or_null(s.min_margin)},
          {"min_relative_margin", finite_or_null(s.min_relative_margin)},
          {"p_grid", std::move(grid)},
          {"seed", s.seed}};
}

inline json opt_result_to_json(const OptResult& r) {
  return {{"value", r.value},
          {"argmax", matrix_to_json(r.argmax.vector())},
          {"restarts_used", r.restarts_used},
          {"converged", r.converged},
          {"history", r.history}};
}

}  // namespace schatten_lab::io
