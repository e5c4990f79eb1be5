#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(UNITRI_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("tv-curve emits the documented header and starting row") {
  auto res = run_cli("tv-curve --n 2 --p 5 --walk K --t-max 3");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"t", "tv", "l2sq"});
  CHECK(rows[1][0] == "0");
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("tv-curve with eps marks the mixing step") {
  auto res = run_cli("tv-curve --n 2 --p 5 --walk K --t-max 4 --eps 0.25 --exact");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(res.out);
  CHECK(rows[0] == std::vector<std::string>{"t", "tv", "l2sq", "mixed"});
  CHECK(rows[1][3] == "0");  // t = 0, tv = 0.8
  CHECK(rows[2][3] == "1");  // t = 1, tv = 0.2 < 0.25
}

TEST_CASE("superclasses table lists all labels") {
  auto res = run_cli("superclasses --n 3 --p 3");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 12);  // header + 11 labels
  CHECK(rows[0] ==
        std::vector<std::string>{"cells", "phi", "d", "i", "weight"});
  // First row is the empty label with weight 1.
  CHECK(rows[1][0].empty());
  CHECK(rows[1][4] == "1");
  std::uint64_t total = 0;
  for (std::size_t r = 1; r < rows.size(); ++r)
    total += std::stoull(rows[r][4]);
  CHECK(total == 27);
}

TEST_CASE("bound-curve reproduces the cycle eigenvalue sum") {
  auto res = run_cli("bound-curve --n 2 --p 5 --t-max 3");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"t", "rhs"});
  for (int t = 0; t <= 3; ++t)
    CHECK(std::stod(rows[static_cast<std::size_t>(t) + 1][1]) ==
          doctest::Approx(4.0 * std::pow(16.0, -t)).epsilon(1e-12));
}

TEST_CASE("spectrum is sorted descending") {
  auto res = run_cli("spectrum --walk P --n 2 --p 5");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 6);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t r = 2; r < rows.size(); ++r)
    CHECK(std::stod(rows[r][1]) <= std::stod(rows[r - 1][1]) + 1e-12);
}

TEST_CASE("words verifies and reports every class element") {
  auto res = run_cli("words --n 3 --p 3");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(res.out);
  // p = 3 has a = 1, so only x = 1, 2 per row index i = 1, 2; three
  // elements per class.
  REQUIRE(rows.size() == 13);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r].size() == 7);
    CHECK(std::stoll(rows[r][3]) % 2 == 1);  // odd length
    CHECK(rows[r][4] == "1");                // parity column
    CHECK(rows[r][6].find_first_not_of("+-0123456789 ") == std::string::npos);
  }
}

TEST_CASE("compare emits one row per signed generator") {
  auto res = run_cli("compare --n 3 --p 3");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "row");
}

TEST_CASE("json output mirrors the csv records") {
  auto res = run_cli("tv-curve --n 2 --p 5 --walk K --t-max 2 --format json");
  REQUIRE(res.exit_code == 0);
  auto doc = nlohmann::json::parse(res.out);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 3);
  CHECK(doc[0]["t"] == 0);
  CHECK(doc[0]["tv"].get<double>() == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("exit codes distinguish usage, capacity, and success") {
  CHECK(run_cli("tv-curve --p 4").exit_code == 1);          // not a prime
  CHECK(run_cli("tv-curve --walk X").exit_code == 1);       // bad enum
  CHECK(run_cli("nonsense").exit_code == 1);                // bad subcommand
  CHECK(run_cli("tv-curve --n 5 --p 13").exit_code == 2);   // too many states
  CHECK(run_cli("verify --n 2 --p 5 --exact").exit_code == 0);
}

TEST_CASE("exact reruns are byte-identical and configs round-trip") {
  const std::string dir = "cli_rt";
  std::system(("rm -rf " + dir + " && mkdir " + dir).c_str());

  auto first = run_cli("tv-curve --n 3 --p 3 --walk Q --t-max 12 --exact --jobs 2 --out " +
                       dir + "/a.csv");
  REQUIRE(first.exit_code == 0);
  auto second = run_cli("tv-curve --config " + dir + "/a.csv.cfg --out " + dir +
                        "/b.csv");
  REQUIRE(second.exit_code == 0);
  CHECK(slurp(dir + "/a.csv") == slurp(dir + "/b.csv"));
  CHECK(slurp(dir + "/a.csv.cfg") == slurp(dir + "/b.csv.cfg"));

  // Explicit flags override config values.
  auto third = run_cli("tv-curve --config " + dir + "/a.csv.cfg --t-max 5 --out " +
                       dir + "/c.csv");
  REQUIRE(third.exit_code == 0);
  auto rows = parse_csv(slurp(dir + "/c.csv"));
  CHECK(rows.size() == 7);  // header + t = 0..5

  std::system(("rm -rf " + dir).c_str());
}

TEST_CASE("verify fixtures are reproducible byte for byte") {
  const std::string dir = "cli_fix";
  std::system(("rm -rf " + dir + " && mkdir " + dir).c_str());
  const std::string fixture =
      std::string(UNITRI_FIXTURE_DIR) + "/verify-n2-p5.cfg";
  auto one = run_cli("verify --config " + fixture + " --out " + dir + "/v1.csv");
  auto two = run_cli("verify --config " + fixture + " --out " + dir + "/v2.csv");
  REQUIRE(one.exit_code == 0);
  REQUIRE(two.exit_code == 0);
  const std::string body = slurp(dir + "/v1.csv");
  CHECK(body == slurp(dir + "/v2.csv"));
  CHECK(body.find("FAIL") == std::string::npos);
  CHECK(parse_csv(body)[0] ==
        std::vector<std::string>{"check", "status", "value", "tolerance"});
  std::system(("rm -rf " + dir).c_str());
}

TEST_CASE("words --out writes the one-word-per-line companion file") {
  const std::string dir = "cli_words";
  std::system(("rm -rf " + dir + " && mkdir " + dir).c_str());
  auto res = run_cli("words --n 3 --p 5 --out " + dir + "/w.csv");
  REQUIRE(res.exit_code == 0);
  auto rows = parse_csv(slurp(dir + "/w.csv"));
  std::istringstream lines(slurp(dir + "/w.csv.words"));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    ++count;
    CHECK(rows.at(count).at(6) == line);
  }
  CHECK(count == rows.size() - 1);
  std::system(("rm -rf " + dir).c_str());
}
