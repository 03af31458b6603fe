#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "frachill/error.hpp"
#include "output.hpp"

namespace fs = std::filesystem;
using namespace frachill;
using nlohmann::json;

namespace {

const fs::path kConfigs = FRACHILL_CONFIG_DIR;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("frachill_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("complex and range parsing") {
  using cli::parse_complex;
  CHECK(parse_complex("1.5-2i") == cdouble(1.5, -2.0));
  CHECK(parse_complex("3") == cdouble(3.0, 0.0));
  CHECK(parse_complex("-2.5i") == cdouble(0.0, -2.5));
  CHECK(parse_complex("i") == cdouble(0.0, 1.0));
  CHECK(parse_complex("1e-3+4e1i") == cdouble(1e-3, 40.0));
  CHECK_THROWS(parse_complex("abc"));
  CHECK_THROWS(parse_complex(""));

  const cli::Range r = cli::parse_range("0:1:5");
  CHECK(r.count == 5);
  const auto v = cli::expand(r);
  REQUIRE(v.size() == 5);
  CHECK(v[1] == doctest::Approx(0.25));
  CHECK(v.back() == 1.0);
  CHECK(cli::expand(cli::parse_range("2:2:1")).size() == 1);
  CHECK_THROWS(cli::parse_range("0:1:1"));
  CHECK_THROWS(cli::parse_range("0:1"));
  CHECK_THROWS(cli::parse_range("0:1:0"));
}

TEST_CASE("hashing") {
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(cli::fmt_double(0.1) == "0.10000000000000001");
  CHECK(cli::fmt_double(-2.0) == "-2");
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(cli::run({"ml", "--alpha", "0.5", "--z", "-1"}) == 0);
  CHECK(cli::run({"simulate", "--history", (kConfigs / "constant_history.json").string(), "--t-end", "1"}) == 2);
  CHECK(cli::run({"frobnicate"}) == 2);
  CHECK(cli::run({"ml", "--alpha", "1.5", "--z", "1"}) == 2);

  const fs::path bad = tmp.path / "bad.json";
  std::ofstream(bad) << R"({"alpha": 0.5, "omega": 1, "dim": 1, "harmonics": [{"k": 0, "re": [[1]], "im": [[2]]}]})";
  CHECK(cli::run({"eig", "--system", bad.string()}) == 2);

  const fs::path ragged = tmp.path / "ragged.json";
  std::ofstream(ragged) << "[[1, 0], [0]]";
  CHECK(cli::run({"lti", "--alpha", "0.5", "--matrix", ragged.string()}) == 2);
  const fs::path rot = tmp.path / "rot.json";
  std::ofstream(rot) << R"({"matrix": [[0, -1], [1, 0]]})";
  CHECK(cli::run({"lti", "--alpha", "0.5", "--matrix", rot.string()}) == 0);

  // I/O failure: the output directory is a regular file
  const fs::path file = tmp.path / "plain";
  std::ofstream(file) << "x";
  CHECK(cli::run({"reproduce", "--outdir", (file / "sub").string()}) == 1);
  CHECK(cli::run({"ml", "--alpha", "0.5", "--z", "1", "--threads", "0"}) == 2);
}

TEST_CASE("eigenvalue search through the CLI") {
  TempDir tmp;
  const fs::path unstable = tmp.path / "b25.csv";
  REQUIRE(cli::run({"eig", "--system", (kConfigs / "scalar_b2.5.json").string(), "--N", "20", "--out",
                    unstable.string()}) == 0);
  const auto rows = csv_rows(unstable);
  int positive = 0;
  for (const auto& r : rows) positive += std::stod(r.at(0)) > 0.0;
  CHECK(positive >= 1);
  CHECK(rows.at(0).at(3) == "valid-floquet");

  const fs::path stable = tmp.path / "b1.csv";
  REQUIRE(cli::run({"eig", "--system", (kConfigs / "scalar_b1.json").string(), "--N", "20", "--out",
                    stable.string()}) == 0);
  CHECK(csv_rows(stable).empty());

  // manifest input and output hashes match the files on disk
  const json m = json::parse(slurp(unstable.string() + ".manifest.json"));
  CHECK(m["command"] == "eig");
  CHECK(m["output"]["sha256"] == cli::sha256_file(unstable));
  REQUIRE(m["inputs"].size() == 1);
  CHECK(m["inputs"][0]["sha256"] == cli::sha256_file(kConfigs / "scalar_b2.5.json"));
  CHECK(m.contains("version"));
  CHECK(m.contains("wall_seconds"));
}

TEST_CASE("other subcommands write CSV") {
  TempDir tmp;
  const fs::path sim = tmp.path / "sim.csv";
  REQUIRE(cli::run({"simulate", "--system", (kConfigs / "scalar_b1.json").string(), "--history",
                    (kConfigs / "constant_history.json").string(), "--t-end", "1", "--dt", "0.1", "--out",
                    sim.string()}) == 0);
  const auto srows = csv_rows(sim);
  REQUIRE(srows.size() == 11);
  CHECK(srows.front().at(1) == "1");

  const fs::path fo = tmp.path / "forcing.csv";
  REQUIRE(cli::run({"forcing", "--history", (kConfigs / "ramp_history.json").string(), "--alpha", "0.5", "--t",
                    "0:20:21", "--bound", "--out", fo.string()}) == 0);
  const auto frows = csv_rows(fo);
  REQUIRE(frows.size() == 21);
  for (const auto& r : frows) CHECK(std::abs(std::stod(r.at(1))) <= std::stod(r.at(2)));
  CHECK(std::stod(frows.at(1).at(1)) == doctest::Approx(-0.46738995451021825).epsilon(1e-12));

  const fs::path hd = tmp.path / "det.csv";
  REQUIRE(cli::run({"hill-det", "--system", (kConfigs / "scalar_b1.json").string(), "--N", "3", "--re", "0:1:3",
                    "--im", "-0.5:0.5:2", "--out", hd.string()}) == 0);
  CHECK(csv_rows(hd).size() == 6);

  CHECK(cli::run({"floquet", "--system", (kConfigs / "scalar_b1.json").string(), "--N", "5", "--t-end", "1"}) ==
        1);
}
