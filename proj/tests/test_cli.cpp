#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WGSIM_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "wgsim_cli_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

const char* kValid = R"({"command": "twomode",
  "modes": [{"kind": "coherent", "beta": {"re": 1, "im": 0}}, {"kind": "coherent", "beta": {"re": 0, "im": 0}}],
  "schedule": {"length_um": 100, "windows": [{"pair": [1, 2], "J_meV": 0.1, "z0_um": 50, "sigma_um": 10, "d": 8}]},
  "observables": {"wigner": {"resolution": 11}}})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate exit codes") {
  CHECK(run_cli("validate --config " + write_config("ok.json", kValid).string()) == 0);
  CHECK(run_cli("validate --config " + write_config("unknown.json", R"({"command": "states", "stats": []})").string()) ==
        2);
  CHECK(run_cli("validate --config " +
                write_config("nosched.json", R"({"command": "twomode", "modes": [{"kind": "coherent",
                  "beta": {"re": 1, "im": 0}}, {"kind": "coherent", "beta": {"re": 1, "im": 0}}]})")
                    .string()) == 2);
  CHECK(run_cli("validate --config " + write_config("broken.json", "{").string()) == 2);
  CHECK(run_cli("validate") == 2);
}

TEST_CASE("every shipped configuration validates") {
  for (const auto& entry : fs::directory_iterator(WGSIM_CONFIGS)) {
    CAPTURE(entry.path().string());
    CHECK(run_cli("validate --config " + entry.path().string()) == 0);
  }
}

TEST_CASE("subcommand must match the configuration") {
  const auto cfg = write_config("ok2.json", kValid).string();
  CHECK(run_cli("fourmode --config " + cfg) == 2);
  const auto out = fs::temp_directory_path() / "wgsim_cli_test" / "run";
  CHECK(run_cli("twomode --config " + cfg + " --out " + out.string() + " --threads 2 --reproducible") == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
}

TEST_CASE("resource and invariant failures have their own exit codes") {
  const auto huge = write_config("huge.json", R"({"command": "cutoff-study",
    "modes": [{"kind": "coherent", "beta": {"re": 1, "im": 0}}, {"kind": "coherent", "beta": {"re": 0, "im": 0}}],
    "schedule": {"length_um": 100, "windows": []},
    "oracle": {"cutoffs": [2, 1000], "max_dimension": 65536}})");
  const auto out = (fs::temp_directory_path() / "wgsim_cli_test" / "x").string();
  CHECK(run_cli("cutoff-study --config " + huge.string() + " --out " + out) == 3);

  // A dark output mode leaves g2 undefined, which the feature map refuses.
  const auto dark = write_config("dark.json", R"({"command": "classify",
    "schedule": {"length_um": 100, "windows": []},
    "classification": {"n_points": 400, "n_resamples": 2, "encoding": {"mode4": {"re": 0, "im": 0}}}})");
  CHECK(run_cli("classify --config " + dark.string() + " --out " + out) == 4);
}

TEST_CASE("seed override changes the dataset deterministically") {
  const auto cfg = write_config("cls.json", R"({"command": "classify", "seed": 1,
    "schedule": {"length_um": 100, "windows": [{"pair": [1, 2], "J_meV": 0.1, "z0_um": 50, "sigma_um": 10, "d": 8}]},
    "classification": {"n_points": 400, "n_resamples": 2, "boundary_resolution": 5}})");
  const auto base = fs::temp_directory_path() / "wgsim_cli_test";
  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  REQUIRE(run_cli("classify --config " + cfg.string() + " --out " + (base / "s1").string()) == 0);
  REQUIRE(run_cli("classify --config " + cfg.string() + " --seed 9 --out " + (base / "s9").string()) == 0);
  REQUIRE(run_cli("classify --config " + cfg.string() + " --seed 9 --out " + (base / "s9b").string()) == 0);
  CHECK(read(base / "s1" / "features_quantum.csv") != read(base / "s9" / "features_quantum.csv"));
  CHECK(read(base / "s9" / "features_quantum.csv") == read(base / "s9b" / "features_quantum.csv"));
}

}  // TEST_SUITE
