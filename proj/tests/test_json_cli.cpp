#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "canomat/json_io.hpp"
#include "helpers.hpp"

using namespace canomat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / ("canomat_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args, const fs::path& dir) {
  std::string cmd = "cd '" + dir.string() + "' && '" + std::string(CANOMAT_CLI_PATH) + "' " + args +
                    " > cli_stdout.txt 2> cli_stderr.txt";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("non-finite numbers") {
  CHECK(number_to_json(inf) == "inf");
  CHECK(number_from_json(json("-inf")) == -inf);
  CHECK(std::isnan(number_from_json(json("nan"))));
  CHECK_THROWS_AS(number_from_json(json("x")), std::invalid_argument);
}

TEST_CASE("measure JSON round trip is exact") {
  auto m = testing::jue_measure(2, 3, 1, 0, 5);
  json j = measure_to_json(m);
  CHECK(j["$schema"] == kSchemaMeasure);
  auto back = measure_from_json(json::parse(j.dump()));
  REQUIRE(back.atoms().size() == m.atoms().size());
  for (std::size_t i = 0; i < m.atoms().size(); ++i) {
    CHECK(back.atoms()[i].x == m.atoms()[i].x);
    CHECK((back.atoms()[i].w.mat() - m.atoms()[i].w.mat()).norm() == 0.0);
  }
  auto ac = kmk_measure(1, 2, 2, 16);
  auto ac_back = measure_from_json(json::parse(measure_to_json(ac).dump()));
  REQUIRE(ac_back.ac().has_value());
  CHECK(ac_back.ac()->nodes == ac.ac()->nodes);
  CHECK(ac_back.ac()->quad_weights == ac.ac()->quad_weights);
}

TEST_CASE("chain and canonical JSON round trips") {
  auto m = testing::jue_measure(2, 3, 0, 0, 6);
  auto chain = gram_schmidt(m, 3);
  auto canon = canonical_from_recursion(chain);
  auto c2 = chain_from_json(json::parse(chain_to_json(chain).dump()));
  for (int k = 0; k < 3; ++k) CHECK((c2.B[k].mat() - chain.B[k].mat()).norm() < 1e-14);
  auto k2 = canonical_from_json(json::parse(canonical_to_json(canon).dump()));
  for (int k = 0; k < canon.m; ++k) CHECK((k2.U[k] - canon.U[k]).norm() < 1e-12);
}

TEST_CASE("structured measure JSON round trip") {
  auto fam = kmk_mismatch_family(0, 0, 0.5, 0.5, 1, 64);
  auto j = json::parse(structured_to_json(fam.measure).dump());
  auto back = structured_from_json(j, std::nan(""), std::nan(""));
  CHECK(back.kmk.kappa1 == 0.0);
  CHECK(back.h_nodes == fam.measure.h_nodes);
  j.erase("h_quad_weights");
  auto again = structured_from_json(j, std::nan(""), std::nan(""));
  CHECK(again.h_quad_weights == fam.measure.h_quad_weights);
}

TEST_CASE("cli: sample, reproducibility and validation") {
  auto dir = scratch_dir();
  CHECK(run_cli("sample --kind jue --N 6 --p 2 --a 0 --b 0 --seed 1 --out a.json", dir) == 0);
  CHECK(run_cli("sample --kind jue --N 6 --p 2 --a 0 --b 0 --seed 1 --out b.json", dir) == 0);
  auto a = read_json_file((dir / "a.json").string()), b = read_json_file((dir / "b.json").string());
  CHECK(a["atoms"].size() == 6);
  CHECK(fs::exists(dir / "a.csv"));
  CHECK(a["manifest"]["seeds"]["sample"] == 1);
  for (auto* d : {&a, &b}) {
    (*d)["manifest"].erase("timestamp");
    (*d)["manifest"].erase("outputs");
    (*d)["manifest"].erase("argv");
  }
  CHECK(a.dump() == b.dump());
  CHECK(run_cli("sample --kind lue --a -1", dir) == 2);
  CHECK(run_cli("sample --kind jue --N 5 --p 2", dir) == 2);
  CHECK(run_cli("--help", dir) == 0);
  CHECK(run_cli("frobnicate", dir) == 2);
}

TEST_CASE("cli: output directory from the environment") {
  auto dir = scratch_dir();
  fs::create_directories(dir / "outdir");
  CHECK(run_cli("sample --seed 3 --out env.json", dir) == 0);
  std::string cmd = "cd '" + dir.string() + "' && CANOMAT_OUT_DIR=outdir '" + std::string(CANOMAT_CLI_PATH) +
                    "' sample --seed 3 --out env.json > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "outdir" / "env.json"));
}

TEST_CASE("cli: decompose") {
  auto dir = scratch_dir();
  write_json_file((dir / "arcsine.json").string(), measure_to_json(arcsine_measure(2, 200)));
  REQUIRE(run_cli("decompose --measure arcsine.json --depth 6", dir) == 0);
  auto c = read_json_file((dir / "canonical.json").string());
  auto canon = canonical_from_json(c);
  for (const auto& u : canon.U_herm) CHECK((u.mat() - 0.5 * eye(2)).norm() < 1e-6);

  REQUIRE(run_cli("sample --kind jue --N 8 --p 2 --a 1 --b 0 --seed 4 --out jue.json", dir) == 0);
  REQUIRE(run_cli("decompose --measure jue.json", dir) == 0);
  auto r = read_json_file((dir / "recursion.json").string());
  CHECK(number_from_json(r["manifest"]["round_trip_residual"]) < 1e-8);
  CHECK(r["manifest"]["depth"] == 4);

  std::vector<Atom> atoms{{0.0, HermitianMatrix::scalar(1, 0.25)},
                          {0.3, HermitianMatrix::scalar(1, 0.25)},
                          {0.6, HermitianMatrix::scalar(1, 0.25)},
                          {0.9, HermitianMatrix::scalar(1, 0.25)}};
  write_json_file((dir / "edge.json").string(), measure_to_json(MatrixMeasure(1, atoms)));
  CHECK(run_cli("decompose --measure edge.json --depth 4", dir) == 3);
  auto err = slurp(dir / "cli_stderr.txt");
  CHECK(err.find("canonical moment") != std::string::npos);
}

TEST_CASE("cli: identities, sumrule, mc-test") {
  auto dir = scratch_dir();
  REQUIRE(run_cli("sample --kind jue --N 8 --p 2 --a 1 --b 1 --seed 9 --out m.json", dir) == 0);
  CHECK(run_cli("identities --measure m.json --depth 4", dir) == 0);
  auto rep = read_json_file((dir / "identities.json").string());
  CHECK(rep["reports"].size() >= 4);

  CHECK(run_cli("sumrule --family kmk-mismatch --kappa 0,0 --kappa-prime 1,1 --depth 20", dir) == 0);
  auto s = read_json_file((dir / "sumrule.json").string());
  CHECK(number_from_json(s["residual"]) < 1e-5);
  CHECK(run_cli("sumrule --family perturbed-kmk --kappa 1,2 --random-perturb 3 --p 2 --perturb-scale 0.05 --depth 20",
                dir) == 0);
  CHECK(run_cli("sumrule --family perturbed-kmk --kappa 1,2", dir) == 2);
  CHECK(run_cli("sumrule --family kmk-mismatch --kappa 0,x", dir) == 2);

  write_json_file((dir / "structured.json").string(), structured_to_json(kmk_mismatch_family(0.5, 1, 0.5, 1, 1, 100).measure));
  CHECK(run_cli("sumrule --measure structured.json --depth 12 --out sr.json", dir) == 0);

  int code = run_cli("mc-test --suite gue-coefficients --samples 100 --out mc.json", dir);
  CHECK((code == 0 || code == 1));
  auto mc = read_json_file((dir / "mc.json").string());
  CHECK(mc["cells"].size() > 0);
  CHECK(mc["manifest"]["subcommand"] == "mc-test");
  CHECK(run_cli("mc-test --suite nope", dir) == 2);
}
