#include "qfmin/problem_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace qfmin::io {

namespace {

using nlohmann::json;

Scalar parse_scalar(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError(where + ": expected a number or a [re, im] pair");
}

Matrix parse_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw ParseError("'" + key + "' must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError("'" + key + "' rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  Matrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ParseError("'" + key + "' is not rectangular (row " + std::to_string(i) + ")");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      out(static_cast<Index>(i), static_cast<Index>(k)) =
          parse_scalar(j[i][k], key + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  if (!out.allFinite()) throw ParseError("'" + key + "' has non-finite entries");
  return out;
}

Vector parse_vector(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw ParseError("'" + key + "' must be a nonempty array");
  Vector out(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    out(static_cast<Index>(i)) = parse_scalar(j[i], key + "[" + std::to_string(i) + "]");
  }
  if (!out.allFinite()) throw ParseError("'" + key + "' has non-finite entries");
  return out;
}

std::optional<double> optional_positive(const json& tol, const char* key) {
  if (!tol.contains(key)) return std::nullopt;
  const json& v = tol.at(key);
  if (!v.is_number()) throw ParseError(std::string("tol.") + key + " must be a number");
  const double d = v.get<double>();
  if (!(d >= 0.0) || !std::isfinite(d)) throw ParseError(std::string("tol.") + key + " must be finite and >= 0");
  return d;
}

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void emit(std::ostringstream& os, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        emit(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << (flat || indent < 0 ? ", " : ",");
        if (!flat) newline(depth + 1);
        emit(os, j[i], indent, depth + 1);
      }
      if (!flat && !j.empty()) newline(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      os << j.dump();
      return;
  }
}

}  // namespace

TolOverrides TolOverrides::over(const TolOverrides& base) const {
  TolOverrides out = base;
  if (rtol) out.rtol = rtol;
  if (pd_tol) out.pd_tol = pd_tol;
  if (neg_tol) out.neg_tol = neg_tol;
  if (angle_warn) out.angle_warn = angle_warn;
  return out;
}

TolConfig TolOverrides::apply(TolConfig config) const {
  if (rtol) config.rtol = *rtol;
  if (pd_tol) config.pd_tol = *pd_tol;
  if (neg_tol) config.neg_tol = *neg_tol;
  if (angle_warn) config.angle_warn = *angle_warn;
  return config;
}

ProblemFile parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("problem file must be a JSON object");
  for (const char* key : {"t", "a", "b"}) {
    if (!doc.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  }
  ProblemFile out;
  out.t = parse_matrix(doc.at("t"), "t");
  out.a = parse_matrix(doc.at("a"), "a");
  out.b = parse_vector(doc.at("b"), "b");
  if (out.t.rows() != out.t.cols()) throw ParseError("'t' must be square");
  if (out.a.cols() != out.t.rows()) throw ParseError("'a' must have as many columns as 't'");
  if (out.b.size() != out.a.rows()) throw ParseError("'b' must have one entry per row of 'a'");
  if (doc.contains("tol")) {
    const json& tol = doc.at("tol");
    if (!tol.is_object()) throw ParseError("'tol' must be an object");
    out.tol.rtol = optional_positive(tol, "rtol");
    out.tol.pd_tol = optional_positive(tol, "pd_tol");
    out.tol.neg_tol = optional_positive(tol, "neg_tol");
    out.tol.angle_warn = optional_positive(tol, "angle_warn");
  }
  return out;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem(text.str());
}

json scalar_to_json(Scalar z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i)));
  return out;
}

json problem_to_json(const ProblemFile& p) {
  json out{{"t", matrix_to_json(p.t)}, {"a", matrix_to_json(p.a)}, {"b", vector_to_json(p.b)}};
  json tol = json::object();
  if (p.tol.rtol) tol["rtol"] = *p.tol.rtol;
  if (p.tol.pd_tol) tol["pd_tol"] = *p.tol.pd_tol;
  if (p.tol.neg_tol) tol["neg_tol"] = *p.tol.neg_tol;
  if (p.tol.angle_warn) tol["angle_warn"] = *p.tol.angle_warn;
  if (!tol.empty()) out["tol"] = tol;
  return out;
}

json to_json(const ResultDocument& doc) {
  json x = json::array();
  for (const Scalar& z : doc.xhat) x.push_back(scalar_to_json(z));
  json diags = json::array();
  for (const Diagnostic& d : doc.diagnostics) {
    diags.push_back({{"code", d.code}, {"message", d.message}, {"value", d.value}});
  }
  json out{{"xhat", x},
           {"min_value", doc.min_value},
           {"method", doc.method},
           {"feasibility_residual", doc.feasibility_residual},
           {"diagnostics", diags}};
  if (doc.verify) {
    out["verify"] = {{"oracle_min", doc.verify->oracle_min}, {"oracle_gap", doc.verify->oracle_gap}};
  }
  return out;
}

ResultDocument result_from_json(const json& j) {
  try {
    ResultDocument doc;
    for (const json& e : j.at("xhat")) doc.xhat.push_back(parse_scalar(e, "xhat"));
    doc.min_value = number_or_nan(j.at("min_value"));
    doc.method = j.at("method").get<std::string>();
    doc.feasibility_residual = number_or_nan(j.at("feasibility_residual"));
    for (const json& d : j.at("diagnostics")) {
      doc.diagnostics.push_back(
          {d.at("code").get<std::string>(), d.at("message").get<std::string>(), number_or_nan(d.at("value"))});
    }
    if (j.contains("verify")) {
      const json& v = j.at("verify");
      doc.verify = VerifyInfo{number_or_nan(v.at("oracle_min")), number_or_nan(v.at("oracle_gap"))};
    }
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string emit_json(const json& j, int indent) {
  std::ostringstream os;
  emit(os, j, indent, 0);
  return os.str();
}

}  // namespace qfmin::io
