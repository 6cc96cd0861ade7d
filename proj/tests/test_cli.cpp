#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "qfmin/cli.hpp"
#include "qfmin/problem_file.hpp"
#include "qfmin/random_instances.hpp"

namespace qfmin {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kRankTwoProblem = R"({
  "t": [[14, 20, 28], [20, 83, 40], [28, 40, 56]],
  "a": [[2, 1, -1]],
  "b": [10]
})";

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qfmin_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    ::unsetenv("QFMIN_RTOL");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "qfmin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST(ProblemFile, ParsesRealAndComplexEntries) {
  const io::ProblemFile p = io::parse_problem(R"({"t": [[2, [0, 1]], [[0, -1], 2]], "a": [[1, 0]], "b": [[3, 4]],
                                                  "tol": {"rtol": 1e-9, "angle_warn": 0.01}})");
  EXPECT_EQ(p.t(0, 1), Scalar(0, 1));
  EXPECT_EQ(p.t(1, 0), Scalar(0, -1));
  EXPECT_EQ(p.b(0), Scalar(3, 4));
  EXPECT_EQ(p.tol.rtol, 1e-9);
  EXPECT_EQ(p.tol.angle_warn, 0.01);
  EXPECT_FALSE(p.tol.pd_tol);
}

TEST(ProblemFile, RejectsMalformedInput) {
  const std::vector<std::string> bad{
      "not json",
      R"({"a": [[1]], "b": [1]})",
      R"({"t": [[1, 0], [0]], "a": [[1, 0]], "b": [1]})",
      R"({"t": [[1, 0], [0, 1]], "a": [[1, 0, 0]], "b": [1]})",
      R"({"t": [[1, 0], [0, 1]], "a": [[1, 0]], "b": [1, 2]})",
      R"({"t": [[1, "x"], [0, 1]], "a": [[1, 0]], "b": [1]})",
      R"({"t": [[1, [1, 2, 3]], [0, 1]], "a": [[1, 0]], "b": [1]})",
      R"({"t": [[1]], "a": [[1]], "b": [1], "tol": {"rtol": -1}})",
  };
  for (const auto& text : bad) {
    EXPECT_THROW(io::parse_problem(text), io::ParseError) << text;
  }
}

TEST(ProblemFile, ProblemRoundTrip) {
  std::mt19937_64 rng(41);
  io::ProblemFile p;
  p.t = random::gaussian(rng, 3, 3, true);
  p.a = random::gaussian(rng, 2, 3, true);
  p.b = random::gaussian_vector(rng, 2, true);
  const io::ProblemFile back = io::parse_problem(io::emit_json(io::problem_to_json(p)));
  EXPECT_EQ(back.t, p.t);
  EXPECT_EQ(back.a, p.a);
  EXPECT_EQ(back.b, p.b);
}

TEST(ResultDocument, RoundTripIsExact) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> expo(-300, 300);
  for (int trial = 0; trial < 50; ++trial) {
    io::ResultDocument doc;
    for (int i = 0; i < 1 + trial % 5; ++i) {
      doc.xhat.emplace_back(normal(rng) * std::pow(10.0, expo(rng)), trial % 2 ? normal(rng) : 0.0);
    }
    doc.min_value = std::abs(normal(rng)) * std::pow(10.0, expo(rng) / 10);
    doc.method = trial % 2 ? "posdef" : "psd-complement";
    doc.feasibility_residual = std::abs(normal(rng)) * 1e-16;
    doc.diagnostics.push_back({"ill_conditioned_constraint", "message \"quoted\"\n", normal(rng)});
    if (trial % 3 == 0) doc.verify = io::VerifyInfo{normal(rng), 1e-17 * std::abs(normal(rng))};
    const std::string text = io::emit_json(io::to_json(doc));
    EXPECT_EQ(io::result_from_json(json::parse(text)), doc) << text;
  }
}

TEST(ResultDocument, SeventeenDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(10.0), "10");
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(ExitCodes, TotalOverErrorKinds) {
  EXPECT_EQ(cli::exit_code_for(ErrorKind::Infeasible), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::InfeasibleOnComplement), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::NotPositive), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::NotPsd), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::DimensionMismatch), 1);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::NonFinite), 1);
}

TEST_F(CliTest, SolveRankTwoPsd) {
  const std::string path = write("rank2.json", kRankTwoProblem);
  const Outcome r = run({"solve", "--problem", path, "--method", "psd-complement"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::ResultDocument doc = io::result_from_json(json::parse(r.out));
  EXPECT_EQ(doc.method, "psd-complement");
  ASSERT_EQ(doc.xhat.size(), 3u);
  EXPECT_NEAR(doc.xhat[0].real(), -2.8572, 2e-4);
  EXPECT_NEAR(doc.xhat[1].real(), 10.0, 2e-4);
  EXPECT_NEAR(doc.xhat[2].real(), -5.7143, 2e-4);
  EXPECT_NEAR(doc.min_value, 38100.0 / 7.0, 1e-8);
  EXPECT_FALSE(doc.verify);

  const Outcome auto_r = run({"solve", "--problem", path});
  ASSERT_EQ(auto_r.code, 0);
  EXPECT_EQ(io::result_from_json(json::parse(auto_r.out)).method, "psd-complement");
}

TEST_F(CliTest, SolveVerify) {
  const std::string path = write("rank2.json", kRankTwoProblem);
  const Outcome r = run({"solve", "--problem", path, "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::ResultDocument doc = io::result_from_json(json::parse(r.out));
  ASSERT_TRUE(doc.verify);
  EXPECT_LE(doc.verify->oracle_gap, 1e-8);

  const std::string pd = write("pd.json", R"({"t": [[1, 0], [0, 2]], "a": [[1, 1]], "b": [3]})");
  const Outcome p = run({"solve", "--problem", pd, "--verify", "--method", "posdef-diag"});
  ASSERT_EQ(p.code, 0) << p.err;
  const io::ResultDocument pdoc = io::result_from_json(json::parse(p.out));
  EXPECT_EQ(pdoc.method, "posdef-diag");
  EXPECT_NEAR(pdoc.min_value, 6.0, 1e-12);
  EXPECT_LE(pdoc.verify->oracle_gap, 1e-12);
}

TEST_F(CliTest, SolveExitCodes) {
  const std::string infeasible = write("inf.json", R"({"t": [[1, 0], [0, 1]], "a": [[1, 0], [1, 0]], "b": [1, 2]})");
  const Outcome a = run({"solve", "--problem", infeasible});
  EXPECT_EQ(a.code, 2);
  EXPECT_EQ(json::parse(a.out)["error"], "Infeasible");
  EXPECT_FALSE(a.err.empty());

  const std::string off_complement = write("offc.json", R"({"t": [[1, 0], [0, 0]], "a": [[0, 1]], "b": [1]})");
  EXPECT_EQ(run({"solve", "--problem", off_complement}).code, 2);

  const std::string indefinite = write("indef.json", R"({"t": [[1, 0], [0, -0.5]], "a": [[1, 1]], "b": [1]})");
  EXPECT_EQ(run({"solve", "--problem", indefinite}).code, 3);

  const std::string pd = write("pd.json", R"({"t": [[1, 0], [0, 2]], "a": [[1, 1]], "b": [3]})");
  EXPECT_EQ(run({"solve", "--problem", pd, "--method", "psd-complement"}).code, 3);

  const std::string garbage = write("bad.json", "{");
  const Outcome g = run({"solve", "--problem", garbage});
  EXPECT_EQ(g.code, 1);
  EXPECT_TRUE(g.out.empty());
  EXPECT_EQ(run({"solve", "--problem", (dir_ / "missing.json").string()}).code, 1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", pd, "--method", "newton"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, ToleranceOverrides) {
  // Eigenvalue 1e-9 next to 1: singular under rtol 1e-6, definite by default.
  const std::string path = write("near.json", R"({"t": [[1, 0], [0, 1e-9]], "a": [[1, 0]], "b": [1]})");
  EXPECT_EQ(io::result_from_json(json::parse(run({"solve", "--problem", path}).out)).method, "posdef");
  const Outcome flag = run({"solve", "--problem", path, "--rtol", "1e-6", "--pd-tol", "1e-6"});
  ASSERT_EQ(flag.code, 0) << flag.err;
  EXPECT_EQ(io::result_from_json(json::parse(flag.out)).method, "psd-complement");

  const std::string filed =
      write("near_tol.json", R"({"t": [[1, 0], [0, 1e-9]], "a": [[1, 0]], "b": [1], "tol": {"rtol": 1e-6, "pd_tol": 1e-6}})");
  EXPECT_EQ(io::result_from_json(json::parse(run({"solve", "--problem", filed}).out)).method, "psd-complement");
  // Flags beat the file.
  const Outcome back = run({"solve", "--problem", filed, "--rtol", "1e-14", "--pd-tol", "1e-14"});
  EXPECT_EQ(io::result_from_json(json::parse(back.out)).method, "posdef");

  ::setenv("QFMIN_RTOL", "oops", 1);
  EXPECT_EQ(run({"solve", "--problem", path}).code, 1);
  ::unsetenv("QFMIN_RTOL");
}

TEST_F(CliTest, SolveIsDeterministic) {
  std::mt19937_64 rng(43);
  const QpProblem p = random::psd_instance(rng, 6, 2, 2, true);
  const std::string path = write("rand.json", io::emit_json(io::problem_to_json({p.t(), p.a(), p.b(), {}})));
  const Outcome first = run({"solve", "--problem", path, "--verify"});
  const Outcome second = run({"solve", "--problem", path, "--verify"});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, second.out);
}

TEST_F(CliTest, CheckRankTwoProblem) {
  const Outcome r = run({"check", "--problem", write("rank2.json", kRankTwoProblem)});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["ep"].get<bool>());
  EXPECT_EQ(j["positivity"], "PSD-singular");
  EXPECT_EQ(j["rank"], 2);
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_TRUE(j["reverse_order"].is_object());
  EXPECT_TRUE(j["principal_angle"].is_object());
}

TEST_F(CliTest, CheckIdentityAndNilpotent) {
  const json id = json::parse(
      run({"check", "--problem", write("id.json", R"({"t": [[1, 0], [0, 1]], "a": [[1, 1]], "b": [1]})")}).out);
  EXPECT_TRUE(id["ep"].get<bool>());
  EXPECT_EQ(id["positivity"], "PD");
  // With B = I the reverse-order law holds for any A.
  EXPECT_TRUE(id["reverse_order"]["holds"].get<bool>());

  const Outcome nil = run({"check", "--problem", write("nil.json", R"({"t": [[0, 1], [0, 0]], "a": [[1, 1]], "b": [1]})")});
  ASSERT_EQ(nil.code, 0) << nil.err;
  const json n = json::parse(nil.out);
  EXPECT_FALSE(n["ep"].get<bool>());
  EXPECT_EQ(n["positivity"], "non-hermitian");
}

TEST_F(CliTest, L2Demo) {
  const std::string csv = (dir_ / "series.csv").string();
  const Outcome r = run({"l2demo", "--sizes", "10,100,1000", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 3u);
  for (std::size_t i = 0; i + 1 < 3; ++i) {
    EXPECT_GT(j["rows"][i]["abs_error"].get<double>(), j["rows"][i + 1]["abs_error"].get<double>());
  }

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,min_value,abs_error");
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 3);

  const json two = json::parse(run({"l2demo", "--sizes", "2"}).out);
  EXPECT_NEAR(two["rows"][0]["min_value"].get<double>(), 2.25, 1e-13);

  EXPECT_EQ(run({"l2demo"}).code, 1);
  EXPECT_EQ(run({"l2demo", "--sizes", ""}).code, 1);
  EXPECT_EQ(run({"l2demo", "--sizes", "100,10"}).code, 1);
  EXPECT_EQ(run({"l2demo", "--sizes", "0"}).code, 1);
}

}  // namespace
}  // namespace qfmin
