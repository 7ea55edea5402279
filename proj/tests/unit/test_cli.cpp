#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "arat/cli.hpp"
#include "arat/error.hpp"
#include "arat/io.hpp"
#include "fixtures.hpp"

namespace arat {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "arat_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Io, RoundTrip) {
  const AratGame g = testing::example1();
  EXPECT_TRUE(parse_game_json(game_to_json(g)) == g);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const AratGame r = testing::random_game(rng, 3, 3, 0.37);
    EXPECT_TRUE(parse_game_json(game_to_json(r, -1)) == r);
  }
}

TEST(Io, ParseErrors) {
  for (const char* text :
       {"{", "[]", "{\"beta\": 0.5}", "{\"beta\": \"x\", \"states\": []}",
        "{\"beta\": 0.5, \"states\": []}",
        "{\"beta\": 0.5, \"states\": [{\"playerI\": {\"rewards\": [1], "
        "\"transitions\": [[1, 0]]}, \"playerII\": {\"rewards\": [1], "
        "\"transitions\": [[0]]}}]}",
        "{\"beta\": 0.5, \"states\": [{\"playerI\": {\"rewards\": [1, 2], "
        "\"transitions\": [[1]]}, \"playerII\": {\"rewards\": [1], "
        "\"transitions\": [[0]]}}]}"}) {
    try {
      parse_game_json(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << text;
    }
  }
  EXPECT_THROW(load_game("/nonexistent/game.json"), Error);
}

TEST(Io, CsvVector) {
  EXPECT_EQ(parse_csv_vector("1, 2.5,3e1"), (Vector(3) << 1, 2.5, 30).finished());
  EXPECT_THROW(parse_csv_vector("1,,2"), Error);
  EXPECT_THROW(parse_csv_vector("1,x"), Error);
  EXPECT_THROW(parse_csv_vector(""), Error);
}

TEST(Solve, RestartsAfterANonComplementaryLimit) {
  // Sixth game of this stream ends at a non-complementary t = 0 point from
  // the automatic start.
  std::mt19937_64 rng(9);
  const double betas[] = {0.3, 0.5, 0.9};
  AratGame g;
  for (int k = 0; k <= 5; ++k) g = testing::random_game(rng, 2, 2, betas[k % 3]);

  SolveOptions opt;
  opt.restarts = 0;
  const SolveReport first = solve_game(g, opt);
  ASSERT_EQ(first.trace.status, TraceStatus::kNonComplementaryLimit);
  EXPECT_FALSE(first.ok());
  EXPECT_FALSE(first.failure.empty());

  opt.restarts = 3;
  const SolveReport again = solve_game(g, opt);
  EXPECT_TRUE(again.ok());
  EXPECT_GE(again.restarts, 1u);
  EXPECT_EQ(again.notices.size(), again.restarts);
  EXPECT_EQ(again.x0, std::pow(opt.restart_scale, again.restarts) * first.x0);

  opt.restart_scale = 0.0;
  EXPECT_THROW(solve_game(g, opt), Error);
}

TEST(Solve, InvalidGameThrows) {
  AratGame g = testing::example1();
  g.beta = 1.0;
  try {
    solve_game(g, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidGame);
  }
}

TEST(Cli, ValidateExample1) {
  const CliRun r = run({"validate", testing::data_path("example1.json")});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["valid"].get<bool>());
  EXPECT_FALSE(doc["holds_a"].get<bool>());
  EXPECT_FALSE(doc["holds_b"].get<bool>());
}

TEST(Cli, ValidateErrors) {
  EXPECT_EQ(run({"validate", write("bad.json", "{ not json")}).code, 2);
  EXPECT_EQ(run({"validate", "/nonexistent.json"}).code, 2);
  std::string text = slurp(testing::data_path("example1.json"));
  text.replace(text.find("[[0.5, 0], [0.5, 0]]"), 20, "[[0.5, 0], [-0.5, 1]]");
  const CliRun r = run({"validate", write("neg.json", text)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("p(action 2, to state 1) = -0.5"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"solve", testing::data_path("example1.json"), "--m", "x"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SolveExample1) {
  const std::string json_path = scratch("ex1.json").string();
  const CliRun r = run({"solve", testing::data_path("example1.json"), "--json-out",
                     json_path});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("value: 14 14"), std::string::npos) << r.out;
  const auto doc = nlohmann::json::parse(slurp(json_path));
  EXPECT_EQ(doc["status"], "Converged");
  EXPECT_NEAR(doc["value"][0].get<double>(), 14.0, 1e-8);
  EXPECT_EQ(doc["strategies"]["playerI"], nlohmann::json({1, 1}));
  EXPECT_EQ(doc["strategies"]["playerII"], nlohmann::json({1, 2}));
  EXPECT_TRUE(doc["certificate"]["passed"].get<bool>());
  EXPECT_TRUE(doc["certificate"]["value_ok"].get<bool>());
  EXPECT_TRUE(doc["certificate"]["player_one_ok"].get<bool>());
  EXPECT_TRUE(doc["certificate"]["player_two_ok"].get<bool>());
}

TEST(Cli, SolveExample2WithFixtureStart) {
  const CliRun r = run({"solve", testing::data_path("example2.json"), "--x0",
                     "1,1,1,1,20,20,10,10", "--json-out", "-"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["start"]["source"], "hint");
}

TEST(Cli, InfeasibleHintFallsBack) {
  const CliRun r = run({"solve", testing::data_path("example1.json"), "--x0",
                     "4,5,3,4,8,8,6,2", "--json-out", "-"});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["start"]["source"], "auto");
  EXPECT_EQ(doc["notices"].size(), 1u);
}

TEST(Cli, MaxStepsOne) {
  const CliRun r = run({"solve", testing::data_path("example1.json"),
                     "--max-steps", "1", "--json-out", "-"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "MaxSteps");
}

TEST(Cli, ShiftRewards) {
  AratGame g = testing::example1();
  g = shift_rewards(g, -10.0, 0.0);  // value drops by 20
  const std::string path = write("shifted.json", game_to_json(g));
  const CliRun r = run({"solve", path, "--shift-rewards", "--json-out", "-"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["value"][0].get<double>(), -6.0, 1e-8);
  EXPECT_NEAR(doc["value"][1].get<double>(), -6.0, 1e-8);
  EXPECT_GT(doc["shift"]["playerI"].get<double>(), 0.0);
}

TEST(Cli, BetaOverride) {
  const CliRun bad = run({"solve", testing::data_path("example1.json"),
                       "--beta-override", "1.5"});
  EXPECT_EQ(bad.code, 1);
  const CliRun ok = run({"solve", testing::data_path("example1.json"),
                      "--beta-override", "0.9", "--json-out", "-"});
  EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST(Cli, TracerFlags) {
  const CliRun r = run({"solve", testing::data_path("example1.json"), "--no-landing",
                        "--a0", "1e-9", "--bound", "1e6", "--json-out", "-"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(nlohmann::json::parse(r.out)["message"], "landed on t = 0");
  const CliRun full = run({"solve", testing::data_path("example1.json"), "--full-gate",
                           "--restarts", "0", "--json-out", "-"});
  EXPECT_NE(full.code, 2);
  EXPECT_EQ(run({"solve", testing::data_path("example1.json"), "--eps3", "1"}).code, 1);
}

TEST(Cli, TraceCsv) {
  const std::string csv = scratch("trace.csv").string();
  const std::string js = scratch("trace.json").string();
  const CliRun r = run({"solve", testing::data_path("example1.json"), "--trace",
                     csv, "--json-out", js});
  ASSERT_EQ(r.code, 0);
  std::ifstream in(csv);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("step,t,residual,step_length,det_sign,x_1,", 0), 0u);
  EXPECT_NE(header.find(",y1_8,y2_1,"), std::string::npos);
  EXPECT_EQ(header.substr(header.size() - 5), ",y2_8");
  std::size_t rows = 0;
  std::string first;
  while (std::getline(in, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  const auto doc = nlohmann::json::parse(slurp(js));
  EXPECT_EQ(rows, doc["steps"]["accepted"].get<std::size_t>() + 1);
  EXPECT_EQ(first.rfind("0,1.0000000000000000e+00,", 0), 0u) << first;
}

TEST(Cli, SolveIsDeterministic) {
  std::string out[2];
  std::string csv[2];
  for (int k = 0; k < 2; ++k) {
    const std::string c = scratch("det" + std::to_string(k) + ".csv").string();
    const CliRun r = run({"solve", testing::data_path("example2.json"), "--trace",
                       c, "--json-out", "-"});
    out[k] = r.out;
    csv[k] = slurp(c);
  }
  EXPECT_EQ(out[0], out[1]);
  EXPECT_EQ(csv[0], csv[1]);
}

TEST(Cli, OracleExample1) {
  const CliRun r = run({"oracle", testing::data_path("example1.json")});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["value_iteration"]["value"][0].get<double>(), 14.0, 1e-10);
  bool found = false;
  for (const auto& s : doc["enumeration"]["solutions"]) {
    const std::vector<double> z = s["z"];
    const std::vector<double> want = {6.5, 0, 5.5, 0, 7.5, 0, 0, 8.5};
    bool same = true;
    for (std::size_t i = 0; i < 8; ++i) same = same && std::abs(z[i] - want[i]) < 1e-9;
    found = found || same;
  }
  EXPECT_TRUE(found);
}

TEST(Cli, OracleSingleState) {
  const std::string path = write(
      "one.json",
      R"({"beta": 0.5, "states": [{"playerI": {"rewards": [1], "transitions": [[1]]},
          "playerII": {"rewards": [0], "transitions": [[0]]}}]})");
  const CliRun r = run({"oracle", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["value_iteration"]["value"][0].get<double>(),
              2.0, 1e-12);
}

TEST(Cli, OracleSkipsLargeEnumeration) {
  AratGame g;
  g.beta = 0.5;
  for (std::size_t s = 0; s < 6; ++s) {
    g.r1.push_back(Vector::LinSpaced(3, 1.0, 3.0));
    g.r2.push_back(Vector::LinSpaced(3, 2.0, 4.0));
    g.p1.push_back(Matrix::Constant(3, 6, 0.5 / 6.0));
    g.p2.push_back(Matrix::Constant(3, 6, 0.5 / 6.0));
  }
  const std::string path = write("big.json", game_to_json(g));
  const CliRun r = run({"oracle", path});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["enumeration"]["skipped"].get<bool>());
  EXPECT_EQ(doc["enumeration"]["n"], 36);
}

TEST(Cli, Build) {
  const CliRun r = run({"build", testing::data_path("example1.json")});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["vlcp"]["matrix"][0], nlohmann::json({-0.25, 0.0, 0.75, 0.0}));
  EXPECT_EQ(doc["lcp"]["n"], 8);
  EXPECT_EQ(doc["lcp"]["copies"][3], nlohmann::json({7, 8}));
}

}  // namespace
}  // namespace arat
