#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "avoidctl_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const int status = std::system((std::string(AVOIDCTL_PATH) + " " + args + " > /dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_CASE("gen writes the graph and a sidecar") {
  const auto dir = scratch();
  const auto out = dir / "gadget.txt";
  CHECK(run("gen bipartite-gadget --a 2 --b 2 --k 2 --d 2 -o " + out.string()) == 0);
  REQUIRE(fs::exists(out));
  const json side = load(fs::path(out.string() + ".json"));
  CHECK(side["construction"] == "bipartite-gadget");
  const json rep = [&] {
    run("gen bipartite-gadget --a 2 --b 2 --k 2 --d 2 -o " + out.string() + " --report " +
        (dir / "gen.json").string());
    return load(dir / "gen.json");
  }();
  CHECK(rep["n"] == 6);
  CHECK(rep["m"] == 12);
  CHECK(rep["min_out"] == 2);
}

TEST_CASE("oracle certifies the small gadget") {
  const auto dir = scratch();
  const auto g = dir / "small.txt";
  REQUIRE(run("gen bipartite-gadget --a 1 --b 2 --k 2 --d 2 -o " + g.string()) == 0);
  const auto rep = dir / "oracle.json";
  CHECK(run("oracle unavoidable -i " + g.string() + " --pattern K_onedir_1_2 --k 2 --report " +
            rep.string()) == 0);
  CHECK(load(rep)["verdict"] == "unavoidable_witness");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("reduce no-such-kind 2>/dev/null") == 2);
  const auto bad = scratch() / "bad.txt";
  std::ofstream(bad) << "2 1\n0 2\n";
  CHECK(run("verify -i " + bad.string() + " --k 1 2>/dev/null") == 2);
}

TEST_CASE("verify reports failures with exit 1") {
  const auto tri = scratch() / "tri.txt";
  std::ofstream(tri) << "3 3\n0 1\n1 2\n2 0\n";
  const auto rep = scratch() / "verify.json";
  CHECK(run("verify -i " + tri.string() + " --k 2 --report " + rep.string()) == 1);
  CHECK(load(rep)["verified"] == false);
  CHECK(run("verify -i " + tri.string() + " --k 1 --patterns C3_2") == 0);
}

TEST_CASE("end-to-end C3/C5 reduction") {
  const auto dir = scratch();
  const auto host = dir / "host.txt";
  REQUIRE(run("gen random-regular --n 300000 --d 20 --seed 7 -o " + host.string()) == 0);
  const auto out = dir / "reduced.txt";
  const auto rep = dir / "reduce.json";
  CHECK(run("reduce avoid-c35 -i " + host.string() + " --k 2 --profile desk --seed 7 -o " +
            out.string() + " --report " + rep.string()) == 0);
  const json r = load(rep);
  CHECK(r["verified"] == true);
  CHECK(r["min_out"] >= 2);
}

TEST_CASE("missing input is a usage error") {
  const auto missing = scratch() / "no_such_graph.txt";
  fs::remove(missing);
  CHECK(run("verify -i " + missing.string() + " --k 1 2> /dev/null") == 2);
}
