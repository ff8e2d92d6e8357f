#include <catch_amalgamated.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "modecast/cli.hpp"
#include "modecast/synthetic.hpp"
#include "test_util.hpp"

using namespace modecast;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("modecast");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& a : full) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path write_series_csv(testutil::TempDir& dir, int length, std::uint64_t seed = 9) {
  SyntheticSpec spec;
  spec.length = length;
  spec.seed = seed;
  const TimeSeries series = generate_synthetic(spec);
  std::string csv = "value\n";
  for (double v : series.values) csv += format_real(v) + '\n';
  const fs::path path = dir.file("series.csv");
  write_file(path, csv);
  return path;
}

const std::vector<std::string> small_vmd_sets{
    "--set", "vmd.mode_count=3", "--set", "vmd.max_iterations=80"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& extra) {
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

}  // namespace

TEST_CASE("decompose writes a mode table and reruns byte-identically") {
  testutil::TempDir dir("cli_decompose");
  const auto input = write_series_csv(dir, 240);
  const auto out_a = dir.file("a");
  const auto out_b = dir.file("b");

  const std::vector<std::string> base{"decompose", "--input", input.string()};
  CHECK(run_cli(with(base, with(small_vmd_sets, {"--out", out_a.string()}))) == 0);
  REQUIRE(fs::exists(out_a / "imf.csv"));

  const std::string imf = read_file(out_a / "imf.csv");
  CHECK(imf.rfind("# center_frequencies,", 0) == 0);
  CHECK(imf.find("mode_1,mode_2,mode_3\n") != std::string::npos);
  std::size_t lines = 0;
  for (char c : imf)
    if (c == '\n') ++lines;
  CHECK(lines == 2 + 240);  // comment, header, one row per sample

  CHECK(run_cli(with(base, with(small_vmd_sets, {"--out", out_b.string()}))) == 0);
  CHECK(read_file(out_b / "imf.csv") == imf);
}

TEST_CASE("partition writes the boundary report and both branch series") {
  testutil::TempDir dir("cli_partition");
  const auto input = write_series_csv(dir, 240);
  const auto out = dir.file("out");
  CHECK(run_cli(with({"partition", "--input", input.string()},
                     with(small_vmd_sets, {"--out", out.string()}))) == 0);

  const std::string report = read_file(out / "partition.txt");
  CHECK(report.find("mode_count=3\n") != std::string::npos);
  CHECK(report.find("boundary_index=") != std::string::npos);
  CHECK(report.find("adjacent_mi=") != std::string::npos);
  CHECK(report.find("single_mode=0\n") != std::string::npos);

  for (const char* name : {"low.csv", "high.csv"}) {
    const std::string csv = read_file(out / name);
    CHECK(csv.rfind("value\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv)
      if (c == '\n') ++lines;
    CHECK(lines == 1 + 240);
  }
}

TEST_CASE("train saves a loadable model per flavor") {
  testutil::TempDir dir("cli_train");
  const auto input = write_series_csv(dir, 240);
  const std::vector<std::string> small_search{"--set", "elm.hidden_count=8",
                                              "--set", "pso.population=4",
                                              "--set", "pso.iterations=2"};

  SECTION("plain random hidden layer") {
    const auto out = dir.file("elm");
    CHECK(run_cli({"train", "--input", input.string(), "--model", "elm", "--seed", "5",
                   "--set", "elm.hidden_count=8", "--out", out.string()}) == 0);
    REQUIRE(fs::exists(out / "model.txt"));
    CHECK_FALSE(fs::exists(out / "trace.csv"));
    const ElmModel model = load_model(out / "model.txt");
    CHECK(model.trained());
    CHECK(model.input_weights.cols() == 7);
    CHECK(model.input_weights.rows() == 8);
    CHECK(model.scaling.has_value());
  }

  SECTION("searched hidden layer leaves an optimizer trace") {
    const auto out = dir.file("ipso");
    CHECK(run_cli(with({"train", "--input", input.string(), "--model", "ipso_elm", "--seed", "5",
                        "--out", out.string()},
                       small_search)) == 0);
    REQUIRE(fs::exists(out / "model.txt"));
    REQUIRE(fs::exists(out / "trace.csv"));
    const std::string trace = read_file(out / "trace.csv");
    CHECK(trace.rfind("iteration,gbest_fitness\n", 0) == 0);
    CHECK(trace.find("\n1,") != std::string::npos);
    CHECK(trace.find("\n2,") != std::string::npos);
  }

  SECTION("branch flow saves one model per branch") {
    const auto out = dir.file("vmd");
    CHECK(run_cli(with({"train", "--input", input.string(), "--model", "vmd_ipso_elm", "--seed", "5",
                        "--out", out.string()},
                       with(small_search, small_vmd_sets))) == 0);
    for (const char* name : {"model_low.txt", "model_high.txt", "trace_low.csv", "trace_high.csv"})
      CHECK(fs::exists(out / name));
    const ElmModel low = load_model(out / "model_low.txt");
    const ElmModel high = load_model(out / "model_high.txt");
    CHECK(low.trained());
    CHECK(high.trained());
    REQUIRE(low.scaling.has_value());
    REQUIRE(high.scaling.has_value());
    // branches carry their own value ranges
    CHECK((low.scaling->min != high.scaling->min || low.scaling->max != high.scaling->max));
  }
}

TEST_CASE("forecast applies a saved model over every supervised row") {
  testutil::TempDir dir("cli_forecast");
  const auto input = write_series_csv(dir, 240);
  const auto model_dir = dir.file("model");
  REQUIRE(run_cli({"train", "--input", input.string(), "--model", "elm", "--seed", "5",
                   "--set", "elm.hidden_count=8", "--out", model_dir.string()}) == 0);

  const auto out = dir.file("fc");
  CHECK(run_cli({"forecast", "--input", input.string(), "--model-file",
                 (model_dir / "model.txt").string(), "--out", out.string()}) == 0);
  const std::string csv = read_file(out / "predictions.csv");
  CHECK(csv.rfind("index,actual,predicted\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 233);  // 240 samples, 7 lags, horizon 1

  CHECK(run_cli({"forecast", "--input", input.string(), "--model-file",
                 (model_dir / "model.txt").string(), "--horizon", "0", "--out",
                 dir.file("bad").string()}) == 1);
}

TEST_CASE("experiment produces the full artifact set deterministically") {
  testutil::TempDir dir("cli_experiment");
  const std::vector<std::string> sets{"--set", "models=elm",
                                      "--set", "run_count=2",
                                      "--set", "synthetic.length=240",
                                      "--set", "elm.hidden_count=8",
                                      "--set", "pso.population=4",
                                      "--set", "pso.iterations=2"};
  const auto out_a = dir.file("a");
  CHECK(run_cli(with({"experiment", "--seed", "9", "--out", out_a.string()}, sets)) == 0);
  for (const char* name :
       {"metrics.csv", "predictions.csv", "predictions_elm.csv", "report.txt", "config_echo.cfg",
        "forecast.svg"})
    REQUIRE(fs::exists(out_a / name));
  CHECK_FALSE(fs::exists(out_a / "warnings.txt"));  // plain flow carries no warnings

  const std::string metrics = read_file(out_a / "metrics.csv");
  CHECK(metrics.rfind("model,mape_max,mape_min,mape_mean,rmse_mean\n", 0) == 0);
  CHECK(metrics.find("\nelm,") != std::string::npos);
  CHECK(read_file(out_a / "predictions.csv") == read_file(out_a / "predictions_elm.csv"));
  const std::string echo = read_file(out_a / "config_echo.cfg");
  CHECK(echo.find("base_seed=9\n") != std::string::npos);  // --seed lands in the echo
  CHECK(echo.find("run_count=2\n") != std::string::npos);

  SECTION("reruns and thread counts leave every byte unchanged") {
    const auto out_b = dir.file("b");
    CHECK(run_cli(with({"experiment", "--seed", "9", "--threads", "3", "--out", out_b.string()},
                       sets)) == 0);
    for (const char* name : {"metrics.csv", "predictions.csv", "report.txt", "forecast.svg"})
      CHECK(read_file(out_b / name) == read_file(out_a / name));
  }

  SECTION("a different seed changes the numbers") {
    const auto out_c = dir.file("c");
    CHECK(run_cli(with({"experiment", "--seed", "10", "--out", out_c.string()}, sets)) == 0);
    CHECK(read_file(out_c / "metrics.csv") != metrics);
  }

  SECTION("the combined flow surfaces its decomposition warning") {
    const auto out_d = dir.file("d");
    const std::vector<std::string> vmd_sets{"--set", "models=vmd_ipso_elm",
                                            "--set", "run_count=1",
                                            "--set", "synthetic.length=240",
                                            "--set", "elm.hidden_count=8",
                                            "--set", "pso.population=4",
                                            "--set", "pso.iterations=2",
                                            "--set", "vmd.mode_count=3",
                                            "--set", "vmd.max_iterations=80"};
    CHECK(run_cli(with({"experiment", "--seed", "4", "--out", out_d.string()}, vmd_sets)) == 0);
    REQUIRE(fs::exists(out_d / "warnings.txt"));
    const std::string warnings = read_file(out_d / "warnings.txt");
    CHECK(warnings.rfind("vmd_ipso_elm: ", 0) == 0);
    CHECK(fs::exists(out_d / "predictions_vmd_ipso_elm.csv"));
  }
}

TEST_CASE("plot renders a predictions file as a chart") {
  testutil::TempDir dir("cli_plot");
  write_file(dir.file("pred.csv"), "index,actual,predicted\n0,10,11\n1,12,11.5\n2,14,13\n");
  const auto svg_path = dir.file("chart.svg");
  CHECK(run_cli({"plot", "--input", dir.file("pred.csv").string(), "--out", svg_path.string(),
                 "--title", "demo run"}) == 0);
  const std::string svg = read_file(svg_path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("demo run") != std::string::npos);
  CHECK(svg.find("actual") != std::string::npos);
  CHECK(svg.find("predicted") != std::string::npos);

  write_file(dir.file("junk.csv"), "time,load\n0,10\n");
  CHECK(run_cli({"plot", "--input", dir.file("junk.csv").string(), "--out",
                 dir.file("junk.svg").string()}) == 2);
  CHECK_FALSE(fs::exists(dir.file("junk.svg")));
}

TEST_CASE("usage problems exit 1 and write nothing") {
  testutil::TempDir dir("cli_usage");
  const auto input = write_series_csv(dir, 60);
  const auto out = dir.file("out");

  // missing required --seed
  CHECK(run_cli({"experiment", "--out", out.string()}) == 1);
  // no subcommand at all
  CHECK(run_cli({}) == 1);
  // unknown subcommand
  CHECK(run_cli({"transmogrify"}) == 1);
  // unknown config key
  CHECK(run_cli({"decompose", "--input", input.string(), "--set", "vmd.mode_cnt=3", "--out",
                 out.string()}) == 1);
  // malformed --set entry
  CHECK(run_cli({"decompose", "--input", input.string(), "--set", "novalue", "--out",
                 out.string()}) == 1);
  // config file that does not exist
  CHECK(run_cli({"decompose", "--input", input.string(), "--config", dir.file("absent.cfg").string(),
                 "--out", out.string()}) == 1);
  // searching subcommand without mandatory swarm sizing
  CHECK(run_cli({"train", "--input", input.string(), "--model", "ipso_elm", "--seed", "1", "--out",
                 out.string()}) == 1);
  // unknown model name
  CHECK(run_cli({"train", "--input", input.string(), "--model", "transformer", "--seed", "1",
                 "--out", out.string()}) == 1);

  CHECK_FALSE(fs::exists(out / "imf.csv"));
  CHECK_FALSE(fs::exists(out / "model.txt"));

  // --help is not an error
  CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("runtime problems exit 2") {
  testutil::TempDir dir("cli_runtime");
  const auto out = dir.file("out");
  // missing input data file: the invocation is well-formed, the data is not there
  CHECK(run_cli(with({"decompose", "--input", dir.file("absent.csv").string()},
                     with(small_vmd_sets, {"--out", out.string()}))) == 2);
  CHECK_FALSE(fs::exists(out / "imf.csv"));

  // series too short for the requested mode count
  const auto input = write_series_csv(dir, 60);
  CHECK(run_cli({"decompose", "--input", input.string(), "--set", "vmd.mode_count=16", "--out",
                 out.string()}) == 2);
}

TEST_CASE("the output guard removes what a failed run wrote") {
  testutil::TempDir dir("guard");
  cli_detail::OutputGuard guard;
  guard.write(dir.file("one.txt"), "a");
  guard.write(dir.file("two.txt"), "b");
  REQUIRE(fs::exists(dir.file("one.txt")));
  guard.discard_all();
  CHECK_FALSE(fs::exists(dir.file("one.txt")));
  CHECK_FALSE(fs::exists(dir.file("two.txt")));
}
