#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfmin/dense_core.hpp"
#include "qfmin/pinv_ops.hpp"

namespace qfmin::io {

/// Malformed or unreadable input; the CLI reports it with exit status 1.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TolOverrides {
  std::optional<double> rtol;
  std::optional<double> pd_tol;
  std::optional<double> neg_tol;
  std::optional<double> angle_warn;

  /// Fields set here win over fields set in `base`.
  TolOverrides over(const TolOverrides& base) const;
  TolConfig apply(TolConfig config = {}) const;
};

/// JSON problem document: {"t": [[...]], "a": [[...]], "b": [...], "tol": {...}}.
/// Entries are numbers or [re, im] pairs.
struct ProblemFile {
  Matrix t;
  Matrix a;
  Vector b;
  TolOverrides tol;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

nlohmann::json scalar_to_json(Scalar z);
nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json vector_to_json(const Vector& v);
nlohmann::json problem_to_json(const ProblemFile& p);

struct VerifyInfo {
  double oracle_min = 0.0;
  double oracle_gap = 0.0;

  bool operator==(const VerifyInfo&) const = default;
};

struct ResultDocument {
  std::vector<Scalar> xhat;
  double min_value = 0.0;
  std::string method;
  double feasibility_residual = 0.0;
  std::vector<Diagnostic> diagnostics;
  std::optional<VerifyInfo> verify;

  bool operator==(const ResultDocument&) const = default;
};

nlohmann::json to_json(const ResultDocument& doc);
ResultDocument result_from_json(const nlohmann::json& j);

/// Shortest form with 17 significant digits; non-finite values become null
/// in JSON output.
std::string format_double(double v);

/// Serializes with every floating-point number printed to 17 significant
/// digits, so parse(emit(doc)) reproduces doc exactly.
std::string emit_json(const nlohmann::json& j, int indent = 2);

}  // namespace qfmin::io
