#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "topoforge/io.hpp"
#include "topoforge/rng.hpp"

#ifndef TOPOFORGE_CLI_PATH
#error "TOPOFORGE_CLI_PATH must point at the topoforge binary"
#endif

namespace {

namespace fs = std::filesystem;
using namespace topoforge;

int run_cli(const std::string& args) {
  std::string cmd = std::string(TOPOFORGE_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef _WIN32
  return status;
#else
  return WEXITSTATUS(status);
#endif
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("topoforge_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cli ph reproduces the two-point diagram byte for byte") {
  TempDir tmp;
  std::string clouds = tmp.file("two.ndjson");
  write_file(clouds, "{\"label\": 0, \"points\": [[0,0],[1,0]]}\n");
  std::string out = tmp.file("two.csv");
  REQUIRE(run_cli("ph --input " + clouds + " --out " + out) == 0);
  CHECK(read_file(out) == "birth,death,dim\n0,0.5,0\n0,inf,0\n");
}

TEST_CASE("cli usage errors exit with code 2") {
  TempDir tmp;
  CHECK(run_cli("generate --count 4 --n-points 10 --out " + tmp.file("x.ndjson")) == 2);
  CHECK(run_cli("ph --no-such-flag") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("ph --help") == 0);
}

TEST_CASE("cli runtime errors exit with code 1") {
  TempDir tmp;
  CHECK(run_cli("ph --input " + tmp.file("missing.ndjson") + " --out " + tmp.file("o.csv")) == 1);
}

TEST_CASE("cli generate -> ph -> vectorize -> train -> infer round trip") {
  TempDir tmp;
  std::string clouds = tmp.file("clouds.ndjson");
  REQUIRE(run_cli("generate --classes 1 --classes 2 --count 8 --n-points 20 --seed 5 --out " +
                  clouds) == 0);
  std::vector<LabeledCloud> parsed = clouds_from_ndjson(read_file(clouds));
  REQUIRE(parsed.size() == 8);
  CHECK(parsed[0].cloud.size() == 20);

  std::string diagrams = tmp.file("dgm.csv");
  REQUIRE(run_cli("ph --input " + clouds + " --out " + diagrams) == 0);
  std::vector<std::string> dgm_paths;
  for (int i = 0; i < 8; ++i) {
    std::string p = tmp.file("dgm_" + std::to_string(i) + ".csv");
    REQUIRE(fs::exists(p));
    dgm_paths.push_back(p);
  }

  std::string vectors = tmp.file("pv.csv");
  std::string inputs;
  for (const auto& p : dgm_paths) inputs += " --input " + p;
  REQUIRE(run_cli("vectorize --kind pl --k-max 2 --resolution 5 --estimate" + inputs +
                  " --out " + vectors) == 0);
  REQUIRE(fs::exists(vectors + ".params.json"));
  auto vecs = vectors_from_csv(read_file(vectors));
  REQUIRE(vecs.size() == 8);
  CHECK(vecs[0].size() == 10);

  std::string model = tmp.file("model.json");
  REQUIRE(run_cli("train --clouds " + clouds + " --vectors " + vectors + " --params " +
                  vectors + ".params.json --preset synth-mean --max-epochs 3 --batch-size 4 "
                  "--validation-fraction 0.25 --seed 11 --out " + model) == 0);

  std::string pred_a = tmp.file("pred_a.csv");
  REQUIRE(run_cli("infer --model " + model + " --clouds " + clouds + " --params " + vectors +
                  ".params.json --out " + pred_a) == 0);

  // Permute every cloud's points; predictions must be byte-identical.
  Rng rng(99);
  for (auto& lc : parsed) {
    PointCloud shuffled;
    std::vector<int> order(lc.cloud.size());
    std::iota(order.begin(), order.end(), 0);
    for (int i = lc.cloud.size() - 1; i > 0; --i)
      std::swap(order[i], order[static_cast<int>(rng.below(i + 1))]);
    for (int i : order) shuffled.push_back(lc.cloud.point_vec(i));
    lc.cloud = shuffled;
  }
  std::string permuted = tmp.file("clouds_perm.ndjson");
  write_file(permuted, clouds_to_ndjson(parsed));
  std::string pred_b = tmp.file("pred_b.csv");
  REQUIRE(run_cli("infer --model " + model + " --clouds " + permuted + " --params " + vectors +
                  ".params.json --out " + pred_b) == 0);
  CHECK(read_file(pred_a) == read_file(pred_b));

  // A sidecar with different parameters must be refused.
  std::string other = tmp.file("other_params.json");
  PvParamsFile p;
  p.kind = PvKind::pl;
  p.pl.k_max = 3;
  p.pl.resolution = 5;
  p.normalized = true;
  p.fingerprint = pl_fingerprint(p.pl, true);
  write_file(other, pv_params_to_json(p));
  CHECK(run_cli("infer --model " + model + " --clouds " + clouds + " --params " + other +
                " --out " + tmp.file("pred_c.csv")) == 1);
}

TEST_CASE("cli ph diameter convention doubles the values") {
  TempDir tmp;
  std::string clouds = tmp.file("two.ndjson");
  write_file(clouds, "{\"label\": 0, \"points\": [[0,0],[1,0]]}\n");
  std::string out = tmp.file("two_diam.csv");
  REQUIRE(run_cli("ph --input " + clouds + " --convention diameter --out " + out) == 0);
  CHECK(read_file(out) == "birth,death,dim\n0,1,0\n0,inf,0\n");
}
