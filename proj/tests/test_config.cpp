#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "resonator/errors.hpp"
#include "resonator/runner.hpp"

using namespace resonator;

namespace {

std::string scan_config_text(int workers) {
  return std::string(R"({
    "command": "scan",
    "surface": {"preset": "symmetric-funnel", "m": 2, "separation": 4.0},
    "rep": "trivial",
    "rectangle": {"reMin": 0.2, "reMax": 0.4, "imMin": -0.4, "imMax": 0.4,
                  "gridRe": 3, "gridIm": 3},
    "nodes": 16,
    "tol": 1e-7,
    "workers": )") +
         std::to_string(workers) + "}";
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("config parsing: surfaces, groups, reps") {
  const RunConfig c = parse_config_json(R"({
    "command": "cover-scan",
    "surface": {"preset": "sl2z"},
    "group": {"type": "congruence", "q": 3},
    "rep": "all-nontrivial",
    "rectangle": {"reMin": 0.1, "reMax": 0.3, "imMin": -1, "imMax": 1},
    "nodes": 20, "tol": 1e-6, "workers": 3
  })");
  CHECK(c.command == "cover-scan");
  CHECK(c.surface.kind == SurfaceDescription::Kind::Sl2zExample);
  REQUIRE(c.group.has_value());
  CHECK(c.group->q == 3);
  CHECK(c.rep.kind == RepSelector::Kind::AllNontrivial);
  CHECK(c.nodes == 20);
  CHECK(c.rectangle.M == 20);
  CHECK(c.workers == 3);

  const SurfaceDescription explicitSurface = parse_surface_json(R"({
    "matrices": [[2,1,1,1]],
    "disks": [{"center": -1, "radius": 1}, {"center": 2, "radius": 1}]
  })");
  const SchottkyData s = build_schottky(explicitSurface);
  CHECK(s.m == 1);

  CHECK_THROWS_AS(parse_config_json("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"surface": {"preset": "torus"}})"),
                  ConfigError);
}

TEST_CASE("config hash: canonical, key-order independent, parameter sensitive") {
  const RunConfig a = parse_config_json(scan_config_text(2));
  const RunConfig b = parse_config_json(R"({
    "workers": 2,
    "tol": 1e-7,
    "nodes": 16,
    "rectangle": {"imMax": 0.4, "imMin": -0.4, "reMax": 0.4, "reMin": 0.2,
                  "gridIm": 3, "gridRe": 3},
    "rep": "trivial",
    "surface": {"separation": 4.0, "m": 2, "preset": "symmetric-funnel"},
    "command": "scan"
  })");
  CHECK(a.hash() == b.hash());
  const RunConfig c = parse_config_json(scan_config_text(4));
  CHECK(a.hash() != c.hash());
}

TEST_CASE("17-digit formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 3.141592653589793, 1e-17, -2.5e300}) {
    const std::string text = format_double(v);
    CHECK(std::stod(text) == v);
  }
}

TEST_CASE("scan checkpointing: resume yields a byte-identical report") {
  const RunConfig config = parse_config_json(scan_config_text(2));
  const SchottkyData s = build_schottky(config.surface);
  const Twist twist = trivial_twist(s.m);

  const auto fullCkpt = temp_file("resonator_full.ckpt");
  std::filesystem::remove(fullCkpt);
  const ResonanceReport full =
      scan_with_checkpoint(s, config.rectangle, twist, config.tol,
                           config.workers, fullCkpt.string(), config.hash());
  const std::string fullJson = report_to_json(full);

  // Simulate an interrupted run: keep only the first two checkpoint lines.
  const auto partialCkpt = temp_file("resonator_partial.ckpt");
  {
    std::ifstream in(fullCkpt);
    std::ofstream out(partialCkpt, std::ios::trunc);
    std::string line;
    for (int i = 0; i < 2 && std::getline(in, line); ++i) out << line << "\n";
  }
  const ResonanceReport resumed =
      scan_with_checkpoint(s, config.rectangle, twist, config.tol,
                           config.workers, partialCkpt.string(), config.hash());
  CHECK(report_to_json(resumed) == fullJson);

  // A different run at (the same rectangle, different worker count) resumes
  // to the same bytes as its own uninterrupted run.
  const RunConfig other = parse_config_json(scan_config_text(1));
  const ResonanceReport otherRun =
      scan_with_checkpoint(s, other.rectangle, twist, other.tol, other.workers,
                           "", other.hash());
  CHECK(report_to_json(otherRun) == fullJson);

  // Mismatched hash is rejected.
  CHECK_THROWS_AS(
      scan_with_checkpoint(s, config.rectangle, twist, config.tol,
                           config.workers, partialCkpt.string(), 12345u),
      ConfigMismatch);
  std::filesystem::remove(fullCkpt);
  std::filesystem::remove(partialCkpt);
}

TEST_CASE("determinism: repeated scans produce identical bytes") {
  const RunConfig config = parse_config_json(scan_config_text(3));
  const SchottkyData s = build_schottky(config.surface);
  const Twist twist = trivial_twist(s.m);
  const ResonanceReport r1 = scan_with_checkpoint(
      s, config.rectangle, twist, config.tol, config.workers, "", config.hash());
  const ResonanceReport r2 = scan_with_checkpoint(
      s, config.rectangle, twist, config.tol, config.workers, "", config.hash());
  CHECK(report_to_json(r1) == report_to_json(r2));
}

TEST_CASE("resolve_hom builds the congruence hom") {
  const SchottkyData s = build_schottky(SurfaceDescription::sl2z_example());
  GroupSpec spec;
  spec.kind = GroupSpec::Kind::Congruence;
  spec.q = 2;
  const GroupHom h = resolve_hom(s, spec);
  CHECK(h.group->order == 6);
}

#ifdef RESONATOR_CLI_PATH
TEST_CASE("CLI round trip: dimension and verify exit codes") {
  const auto dir = temp_file("resonator_cli_out");
  std::filesystem::remove_all(dir);
  const auto cfg = temp_file("resonator_cli.json");
  {
    std::ofstream out(cfg);
    out << R"({"surface": {"preset": "cylinder", "length": 2.0}})";
  }
  const std::string cmd = std::string(RESONATOR_CLI_PATH) +
                          " dimension --config " + cfg.string() + " --out " +
                          dir.string() + " > " + (dir / "stdout.txt").string();
  std::filesystem::create_directories(dir);
  CHECK(std::system(cmd.c_str()) == 0);
  std::ifstream in(dir / "stdout.txt");
  std::string firstLine;
  std::getline(in, firstLine);
  CHECK(firstLine == "delta 0");
  CHECK(std::filesystem::exists(dir / "dimension.csv"));

  // Usage errors exit with code 1.
  const int bad =
      std::system((std::string(RESONATOR_CLI_PATH) + " scan --config /nonexistent.json 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(bad) == 1);
  std::filesystem::remove_all(dir);
  std::filesystem::remove(cfg);
}
#endif
