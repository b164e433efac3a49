#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sympsurf/scenario.hpp"

// Command-line front end.  One scenario or suite per invocation; the text
// report always goes to stdout, the JSON rendering to --json when given.
// Exit codes: 0 all checks passed, 1 verification failure, 2 invalid input.

namespace {

int emit(const sympsurf::Report& rep, const std::string& json_path) {
  std::fputs(rep.text().c_str(), stdout);
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", json_path.c_str());
      return 2;
    }
    out << rep.json();
  }
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symplectic surface constructions: scenario runner and "
               "verification suites"};
  app.require_subcommand(1);

  std::string json_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<double> tolerance;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--json", json_path, "write the JSON report to this path");
    sub->add_option("--seed", seed, "seed for randomized sweeps (default 7)");
    sub->add_option("--resolution", resolution,
                    "grid resolution (default 256)");
    sub->add_option("--tolerance", tolerance,
                    "symplectic margin floor (default 1e-9)");
  };

  std::string scenario_path;
  for (const char* kind : {"planes", "perturb", "kahler", "divisor",
                           "seifert"}) {
    CLI::App* sub = app.add_subcommand(
        kind, std::string("run a \"") + kind + "\" scenario file");
    sub->add_option("file", scenario_path, "scenario JSON file")->required();
    add_common(sub);
  }
  std::string suite_name;
  CLI::App* suite = app.add_subcommand("suite", "run a verification suite");
  suite->add_option("name", suite_name,
                    "lemmas | pipelines | kahler | homology | all, or a "
                    "\"suite\" scenario file")
      ->required();
  add_common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const sympsurf::RunOptions opts{seed, resolution, tolerance};
    sympsurf::Report rep;
    if (suite->parsed()) {
      const bool known = suite_name == "lemmas" || suite_name == "pipelines" ||
                         suite_name == "kahler" || suite_name == "homology" ||
                         suite_name == "all";
      rep = known ? sympsurf::suites::run_suite(suite_name, seed.value_or(7),
                                                resolution.value_or(256),
                                                tolerance.value_or(1e-9))
                  : sympsurf::run_scenario_file(suite_name, "suite", opts);
    } else {
      rep = sympsurf::run_scenario_file(
          scenario_path, app.get_subcommands().front()->get_name(), opts);
    }
    return emit(rep, json_path);
  } catch (const sympsurf::SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
