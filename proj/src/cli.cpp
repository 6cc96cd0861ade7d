#include "qfmin/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qfmin/l2_models.hpp"
#include "qfmin/minimizers.hpp"
#include "qfmin/oracle.hpp"
#include "qfmin/pinv_ops.hpp"
#include "qfmin/problem_file.hpp"

namespace qfmin::cli {

namespace {

using nlohmann::json;

struct TolFlags {
  std::optional<double> rtol;
  std::optional<double> pd_tol;
  std::optional<double> neg_tol;
  std::optional<double> angle_warn;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rtol", rtol, "relative rank threshold")->check(CLI::NonNegativeNumber);
    cmd->add_option("--pd-tol", pd_tol, "definiteness gate relative to lambda_max")->check(CLI::NonNegativeNumber);
    cmd->add_option("--neg-tol", neg_tol, "negative-eigenvalue clamp relative to |T|")->check(CLI::NonNegativeNumber);
    cmd->add_option("--angle-warn", angle_warn, "principal angle warning threshold")->check(CLI::NonNegativeNumber);
  }
};

// Flags beat the problem file, which beats QFMIN_RTOL.
TolConfig resolve_tol(const io::TolOverrides& file, const TolFlags& flags) {
  io::TolOverrides env;
  if (const char* raw = std::getenv("QFMIN_RTOL")) {
    try {
      std::size_t used = 0;
      const double v = std::stod(raw, &used);
      if (used != std::string(raw).size() || !(v >= 0.0)) throw std::invalid_argument(raw);
      env.rtol = v;
    } catch (const std::exception&) {
      throw io::ParseError(std::string("QFMIN_RTOL is not a nonnegative number: '") + raw + "'");
    }
  }
  const io::TolOverrides cli{flags.rtol, flags.pd_tol, flags.neg_tol, flags.angle_warn};
  return cli.over(file.over(env)).apply();
}

json error_document(const Error& e) {
  json diag{{"code", to_string(e.kind())}, {"message", e.what()}, {"value", e.value()}};
  return {{"error", to_string(e.kind())}, {"message", e.what()}, {"diagnostics", json::array({diag})}};
}

MethodChoice parse_method(const std::string& name) {
  if (name == "posdef") return MethodChoice::PosDef;
  if (name == "posdef-diag") return MethodChoice::PosDefDiag;
  if (name == "psd-complement") return MethodChoice::PsdComplement;
  return MethodChoice::Auto;
}

int cmd_solve(const std::string& path, const std::string& method, bool verify, const TolFlags& flags,
              std::ostream& out) {
  const io::ProblemFile file = io::load_problem(path);
  const QpProblem problem(file.t, file.a, file.b, resolve_tol(file.tol, flags));
  const MinimizationResult result = solve(problem, parse_method(method));

  io::ResultDocument doc;
  doc.xhat.assign(result.xhat.data(), result.xhat.data() + result.xhat.size());
  doc.min_value = result.min_value;
  doc.method = to_string(result.method);
  doc.feasibility_residual = result.feasibility_residual;
  doc.diagnostics = result.diagnostics;
  if (verify) {
    const oracle::OracleResult check = result.method == Method::PsdComplement
                                           ? oracle::reduced_solve(problem.t(), problem.a(), problem.b())
                                           : oracle::kkt_solve(problem.t(), problem.a(), problem.b());
    const double gap = std::abs(result.min_value - check.min_value) / std::max(1.0, std::abs(check.min_value));
    doc.verify = io::VerifyInfo{check.min_value, gap};
  }
  out << io::emit_json(io::to_json(doc)) << '\n';
  return kOk;
}

const char* class_name(Definiteness kind) {
  switch (kind) {
    case Definiteness::PositiveDefinite: return "PD";
    case Definiteness::PsdSingular: return "PSD-singular";
    case Definiteness::Indefinite: return "indefinite";
  }
  return "indefinite";
}

int cmd_check(const std::string& path, const TolFlags& flags, std::ostream& out) {
  const io::ProblemFile file = io::load_problem(path);
  const TolConfig tol = resolve_tol(file.tol, flags);
  const Matrix& t = file.t;
  const Matrix& a = file.a;

  json report;
  report["n"] = t.rows();
  report["m"] = a.rows();
  report["ep"] = is_ep(t, tol);
  report["ep_residual"] = ep_residual(t, tol);
  report["rank"] = numerical_rank(t, tol).rank;
  report["feasible"] = feasible(a, file.b, tol);

  const bool hermitian = is_hermitian(t, tol.htol);
  report["hermitian"] = hermitian;
  report["reverse_order"] = nullptr;
  report["principal_angle"] = nullptr;
  if (!hermitian) {
    report["positivity"] = "non-hermitian";
    out << io::emit_json(report) << '\n';
    return kOk;
  }

  const SpectrumReport spec = classify_spectrum(t, tol);
  report["positivity"] = class_name(spec.kind);
  json eigenvalues = json::array();
  for (Index i = 0; i < spec.lambda.size(); ++i) eigenvalues.push_back(spec.lambda(i));
  report["eigenvalues"] = eigenvalues;

  // The operator the constraint is composed with: R^-1 for PD T, U1 R^+ for
  // singular PSD T.
  std::optional<Matrix> lift;
  if (spec.kind == Definiteness::PositiveDefinite) {
    lift = sqrt_psd(t, tol).partialPivLu().inverse();
  } else if (spec.kind == Definiteness::PsdSingular) {
    TolConfig gate = tol;
    gate.rtol = std::max(tol.rank_rtol(t.rows(), t.rows()), tol.definiteness_tol(t.rows()));
    const EpDecomposition ep = ep_decompose(t, gate);
    Matrix root_pinv = Matrix::Zero(t.rows(), t.rows());
    if (ep.rank > 0) {
      root_pinv.topLeftCorner(ep.rank, ep.rank) = sqrt_psd(ep.a1, tol).partialPivLu().inverse();
    }
    lift = ep.u1 * root_pinv;
  }
  if (lift) {
    const ReverseOrderReport ro = reverse_order_holds(a, *lift, tol);
    const Matrix direct = pinv_product(a, *lift, tol) - pinv(*lift, tol) * pinv(a, tol);
    report["reverse_order"] = {{"holds", ro.holds},
                               {"commutator_pinv_a", ro.commutator_pinv_a},
                               {"commutator_pinv_b", ro.commutator_pinv_b},
                               {"direct_gap", direct.norm()},
                               {"product_rank", ro.product_rank.rank}};
    const AngleReport angle = principal_angle_diag(a, *lift, tol);
    json angle_doc{{"angle", angle.angle}, {"hi_dim", angle.hi_dim}, {"warning", nullptr}};
    if (angle.warning) angle_doc["warning"] = angle.warning->message;
    report["principal_angle"] = angle_doc;
  }
  out << io::emit_json(report) << '\n';
  return kOk;
}

int cmd_l2demo(const std::vector<long long>& sizes, const std::string& csv_path, long long dense_limit,
               std::ostream& out, std::ostream& err) {
  if (sizes.empty()) {
    err << "l2demo: --sizes needs at least one size\n";
    return kUsage;
  }
  std::vector<Index> n_list(sizes.begin(), sizes.end());
  const l2::TruncationSeries series = l2::example1_convergence(n_list, static_cast<Index>(dense_limit));

  json rows = json::array();
  for (std::size_t i = 0; i < series.sizes.size(); ++i) {
    rows.push_back({{"n", series.sizes[i]}, {"min_value", series.min_values[i]}, {"abs_error", series.errors[i]}});
  }
  out << io::emit_json(json{{"limit", series.limit}, {"rows", rows}}) << '\n';

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw io::ParseError("cannot write CSV file '" + csv_path + "'");
    csv << "n,min_value,abs_error\n";
    for (std::size_t i = 0; i < series.sizes.size(); ++i) {
      csv << series.sizes[i] << ',' << io::format_double(series.min_values[i]) << ','
          << io::format_double(series.errors[i]) << '\n';
    }
  }
  return kOk;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Infeasible:
    case ErrorKind::InfeasibleOnComplement:
      return kInfeasible;
    case ErrorKind::NotPositive:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::NotPsd:
    case ErrorKind::NotSingular:
    case ErrorKind::NotHermitian:
    case ErrorKind::NotEp:
      return kNotPositive;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonFinite:
    case ErrorKind::NotConverged:
    case ErrorKind::SingularBlock:
    case ErrorKind::InvalidArgument:
      return kUsage;
  }
  return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained quadratic-form minimization via Moore-Penrose pseudoinverses", "qfmin"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string method = "auto";
  bool verify = false;
  TolFlags flags;
  auto* solve_cmd = app.add_subcommand("solve", "minimize <x, T x> subject to A x = b");
  solve_cmd->add_option("--problem", problem_path, "problem JSON file")->required();
  solve_cmd->add_option("--method", method, "solver route")
      ->check(CLI::IsMember({"auto", "posdef", "posdef-diag", "psd-complement"}));
  solve_cmd->add_flag("--verify", verify, "cross-check against the brute-force oracle");
  flags.attach(solve_cmd);

  auto* check_cmd = app.add_subcommand("check", "report EP, definiteness and closed-range diagnostics");
  check_cmd->add_option("--problem", problem_path, "problem JSON file")->required();
  flags.attach(check_cmd);

  std::vector<long long> sizes;
  std::string csv_path;
  long long dense_limit = 64;
  auto* demo_cmd = app.add_subcommand("l2demo", "convergence of the truncated shift example");
  demo_cmd->add_option("--sizes", sizes, "ascending truncation sizes, comma separated")
      ->delimiter(',')
      ->required()
      ->check(CLI::PositiveNumber);
  demo_cmd->add_option("--csv", csv_path, "also write n,min_value,abs_error to this file");
  demo_cmd->add_option("--dense-limit", dense_limit, "largest size solved with dense factorizations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "qfmin: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(problem_path, method, verify, flags, out);
    if (*check_cmd) return cmd_check(problem_path, flags, out);
    if (*demo_cmd) return cmd_l2demo(sizes, csv_path, dense_limit, out, err);
  } catch (const io::ParseError& e) {
    err << "qfmin: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "qfmin: " << to_string(e.kind()) << ": " << e.what() << '\n';
    const int code = exit_code_for(e.kind());
    if (code != kUsage) out << io::emit_json(error_document(e)) << '\n';
    return code;
  }
  return kUsage;
}

}  // namespace qfmin::cli
