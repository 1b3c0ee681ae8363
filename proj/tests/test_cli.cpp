#include <cli.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

namespace fs = std::filesystem;
using confmap::cli::run_cli;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("confmap_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

const char* kWedgeSource =
    R"({"kind":"sector","parameters":{"radius":1e-4,"theta0":-1.5707963267948966,"theta1":1.5707963267948966}})";
const char* kWedgeImage =
    R"({"kind":"sector","parameters":{"radius":0.1,"theta0":-0.39269908169872414,"theta1":0.39269908169872414}})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("identity samples fit exactly") {
  const fs::path dir = scratch("identity");
  {
    std::ofstream csv(dir / "id.csv");
    csv << "re_z,im_z,re_w,im_w\n";
    for (int j = 0; j < 64; ++j) {
      const auto z = std::polar(1.0, 6.283185307179586 * j / 64);
      csv.precision(17);
      csv << z.real() << ',' << z.imag() << ',' << z.real() << ',' << z.imag() << '\n';
    }
  }
  CHECK(run({"-o", dir.string(), "fit", (dir / "id.csv").string()}) == 0);
  const json report = read_json(dir / "report.json");
  CHECK(report.at("forward").at("degree").get<int>() <= 1);
  CHECK(report.at("inverse").at("degree").get<int>() <= 1);
  CHECK(fs::exists(dir / "pair.json"));
  CHECK(fs::exists(dir / "fit_manifest.json"));
}

TEST_CASE("input errors") {
  const fs::path dir = scratch("errors");
  std::string err;
  CHECK(run({"-o", dir.string(), "fit", (dir / "missing.csv").string()}, &err) == 1);
  CHECK(err.find("error") != std::string::npos);
  CHECK(run({"-o", dir.string(), "fit"}) == 1);
  CHECK(run({"-o", dir.string(), "crowding", "--geometry", "channel", "--L", "0.5", "--walks", "1000"}) == 1);
  CHECK(run({"-o", dir.string(), "sample", "--geometry", "hexagon:1"}) == 1);
  CHECK(run({"--help"}) == 0);
  CHECK(run({"--version"}) == 0);
}

TEST_CASE("bench rejects an empty workload") {
  const fs::path dir = scratch("bench");
  REQUIRE(run({"-o", dir.string(), "sample", "--geometry", "rectangle:2", "--points", "400"}) == 0);
  REQUIRE(run({"-o", dir.string(), "fit", (dir / "samples.csv").string(), "--tol", "1e-6"}) == 0);
  CHECK(run({"-o", dir.string(), "bench", (dir / "pair.json").string(), "--points", "0"}) == 1);
  CHECK(run({"-o", dir.string(), "bench", (dir / "pair.json").string(), "--points", "2000"}) == 0);
  CHECK(read_json(dir / "bench.json").dump().find("seconds") != std::string::npos);
}

TEST_CASE("perturbed wedge triggers the spurious pole code") {
  const fs::path dir = scratch("wedge");
  const std::string d = dir.string();
  REQUIRE(run({"-o", d, "sample", "--geometry", "wedge:0.25", "--points", "200", "--perturb", "1e-12", "--seed", "1"}) ==
          0);
  REQUIRE(run({"-o", d, "fit", d + "/samples.csv", "--tol", "1e-7"}) == 0);
  std::string err;
  const int code = run({"-o", d, "diagnose", d + "/pair.json", "--source-region", kWedgeSource, "--image-region",
                        kWedgeImage, "--reference", "wedge:0.25", "--samples", d + "/samples.csv", "--open-boundary"},
                       &err);
  CHECK(code == 3);
  CHECK(err.find("warning") != std::string::npos);
  CHECK(!read_json(dir / "quality.json").at("spurious_poles_fwd").empty());
}

TEST_CASE("seeded runs are byte identical and replayable") {
  const fs::path a = scratch("seed_a"), b = scratch("seed_b");
  for (const fs::path& dir : {a, b})
    REQUIRE(run({"-o", dir.string(), "crowding", "--geometry", "disk-quarter", "--walks", "4000", "--seed", "9"}) == 0);
  CHECK(slurp(a / "crowding.json") == slurp(b / "crowding.json"));

  const std::string first = slurp(a / "crowding.json");
  fs::remove(a / "crowding.json");
  CHECK(run({"rerun", (a / "crowding_manifest.json").string()}) == 0);
  CHECK(slurp(a / "crowding.json") == first);
}

TEST_CASE("run manifest round trip") {
  confmap::cli::RunManifest m;
  m.command = "fit";
  m.arguments = {"fit", "x.csv", "--tol", "1e-8"};
  m.inputs = {"x.csv"};
  m.config = {{"tol", 1e-8}};
  m.outputs = {"forward.json"};
  m.version = confmap::cli::version_string();
  const json j = m;
  CHECK(j.get<confmap::cli::RunManifest>() == m);
}

}
