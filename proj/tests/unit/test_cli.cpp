#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "intdim/errors.hpp"
#include "intdim/run_config.hpp"
#include "intdim/runner.hpp"
#include "intdim/svg_plot.hpp"

using namespace intdim;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    RunConfig::parse(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "ok";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

const json kCantor = {{"generator", "cantor"}, {"depth", 8}};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config validation names the offending field") {
  CHECK(field_of({{"command", "estimate"}, {"set", kCantor}, {"theta", 0}}) == "theta");
  CHECK(field_of({{"command", "estimate"}, {"set", kCantor}, {"theta", {0.5, 1.2}}}) == "theta");
  CHECK(field_of({{"command", "estimate"}, {"set", kCantor}, {"colour", 1}}) == "colour");
  CHECK(field_of({{"command", "estimate"}}) == "set");
  CHECK(field_of({{"command", "plot"}, {"set", kCantor}}) == "command");
  CHECK(field_of({{"command", "estimate"}, {"set", kCantor}, {"schedule", {{"k_first", 9}, {"k_last", 4}}}}) ==
        "k_first");
  CHECK(field_of({{"command", "estimate"}, {"set", kCantor}, {"tolerances", {{"tol", -1}}}}) == "tol");
  CHECK(field_of({{"command", "estimate"}, {"set", kCantor}, {"m", {0}}}) == "m");
  CHECK(field_of({{"command", "verify"}}) == "ok");
}

TEST_CASE("set descriptors") {
  CHECK(build_set(kCantor).size() == 256);
  CHECK(build_set({{"generator", "sequence_set"}, {"p", 1.0}, {"count", 10}}).size() == 11);
  const json prod = {{"generator", "product"},
                     {"factors", {{{"generator", "uniform_grid"}, {"dim", 1}, {"per_axis", 3}}, kCantor}}};
  CHECK(build_set(prod).ambient_dim() == 2);
  CHECK_THROWS_AS(build_set({{"generator", "mandelbrot"}}), ValidationError);
}

TEST_CASE("config hash follows the effective configuration") {
  const auto a = RunConfig::parse({{"command", "estimate"}, {"set", kCantor}});
  auto b = RunConfig::parse({{"command", "estimate"}, {"set", kCantor}, {"theta", 1.0}});
  CHECK(a.hash() == b.hash());
  b.seed = 9;
  CHECK(a.hash() != b.hash());
  CHECK(RunConfig::parse(a.to_json()).hash() == a.hash());
}

TEST_CASE("malformed theta exits 2 without computing") {
  TempDir dir("intdim_cli_bad");
  std::ofstream(dir.path.string() + ".json") << R"({"command":"estimate","set":{"generator":"cantor","depth":4},"theta":0})";
  CHECK_THROWS_AS(RunConfig::load(dir.path.string() + ".json"), ValidationError);
  std::filesystem::remove(dir.path.string() + ".json");
  RunConfig cfg = RunConfig::parse({{"command", "project"}, {"set", kCantor}});
  cfg.output = dir.path.string();
  std::ostringstream out, err;
  CHECK(run(cfg, out, err) == kExitValidation);
  CHECK(err.str().find("m:") != std::string::npos);
}

TEST_CASE("estimate writes CSVs, a manifest and a plot, byte-identical on rerun") {
  TempDir a("intdim_cli_a"), b("intdim_cli_b");
  RunConfig cfg = RunConfig::parse(
      {{"command", "estimate"}, {"set", kCantor}, {"theta", {0.5, 1.0}}, {"source", "both"}, {"plot", true}});
  std::ostringstream out, err;
  cfg.output = a.path.string();
  const std::string hash = cfg.hash();
  REQUIRE(run(cfg, out, err) == kExitOk);
  cfg.output = b.path.string();
  REQUIRE(run(cfg, out, err) == kExitOk);
  for (const char* f : {"cover_profile.csv", "capacity_profile.csv", "cover_diagnostics.csv", "plot.svg"}) {
    CHECK(std::filesystem::exists(a.path / f));
    CHECK(slurp(a.path / f) == slurp(b.path / f));
  }
  const json manifest = json::parse(slurp(a.path / "manifest.json"));
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["config_hash"] == hash);
  CHECK(manifest["version"] == kToolVersion);
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest.contains("seeds"));
  const std::string csv = slurp(a.path / "cover_profile.csv");
  CHECK(csv.rfind("theta,m,mode,estimate,residual\n", 0) == 0);
}

TEST_CASE("compute failures still write the manifest") {
  TempDir dir("intdim_cli_fail");
  RunConfig cfg = RunConfig::parse({{"command", "estimate"},
                                    {"set", kCantor},
                                    {"source", "capacity"},
                                    {"tolerances", {{"max_iters", 1}, {"restarts", 0}, {"tol", 1e-15}}}});
  cfg.output = dir.path.string();
  std::ostringstream out, err;
  CHECK(run(cfg, out, err) == kExitCompute);
  const json manifest = json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["exit_code"] == kExitCompute);
  CHECK(manifest["status"] != "ok");
}

TEST_CASE("svg plot is deterministic and well formed") {
  const std::vector<PlotSeries> series = {{"m=1", {0.1, 0.5, 1.0}, {0.1, 0.4, 0.5}, false},
                                          {"frames", {0.5, 1.0}, {0.3, 0.45}, true}};
  const std::string svg = render_svg(series, "test");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg == render_svg(series, "test"));
}

}  // TEST_SUITE
