#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fvinf/io/commands.hpp"
#include "fvinf/io/csv.hpp"
#include "fvinf/io/format.hpp"
#include "fvinf/io/run.hpp"
#include "fvinf/io/scenario.hpp"
#include "fvinf/io/sweep.hpp"
#include "support.hpp"

using namespace fvinf;
using namespace fvinf::io;
namespace fs = std::filesystem;
using testing_support::scratch_dir;
using testing_support::slurp;

namespace {

const std::string short_run = R"(name = short
model.m = 0.2
model.phi0_tilde = 3.5
integration.t_end = 3
integration.step = 1e-3
integration.stride = 50
)";

int cli(const std::string& args) {
  const std::string cmd = std::string(FVINF_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_cfg(const fs::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  testing_support::Gen g;
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(g.uniform(-1.0, 1.0), g.integer(-300, 300));
    EXPECT_EQ(*parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(1e-3), "0.001");
  EXPECT_FALSE(parse_double("1.0x").has_value());
  EXPECT_FALSE(parse_double("").has_value());
  EXPECT_EQ(*parse_double("+2.5"), 2.5);
}

TEST(Config, ParsesCommentsAndWhitespace) {
  const auto e = parse_config("# header\n  model.m =  0.05  # trailing\n\nname=x\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e.at("model.m").value, "0.05");
  EXPECT_EQ(e.at("model.m").line, 2u);
  EXPECT_EQ(e.at("name").value, "x");
}

TEST(Config, MalformedLinesCarryLineNumbers) {
  for (const char* text : {"model.m 0.1\n", "= 3\n", "model.m =\n", "a.m = 1\na.m = 2\n", "model..m = 1\n"}) {
    try {
      parse_config(text);
      FAIL() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::validation);
      EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
    }
  }
}

TEST(Scenario, MinimalFileEchoesCrossover) {
  const auto s = parse_scenario("model.m = 0.01\n");
  ASSERT_TRUE(s.model.phi_star.has_value());
  EXPECT_NEAR(*s.model.phi_star, 4.94268, 5e-6);
  EXPECT_NE(to_config_text(s).find("model.phi_star = 4.94268"), std::string::npos);
  EXPECT_TRUE(s.cosmo.alpha.has_value());
  EXPECT_TRUE(s.cosmo.a0_tilde.has_value());
  EXPECT_EQ(*s.model.window_r2, 10.0);
}

TEST(Scenario, NegativeMassNamed) {
  try {
    parse_scenario("model.m = -1\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("m > 0"), std::string::npos);
    EXPECT_EQ(exit_code(e.kind()), 1);
  }
}

TEST(Scenario, EveryViolationListed) {
  try {
    parse_scenario("model.m = -1\nmodel.G = 0\nnucleation.S_E = -2\nintegration.t_end = -5\ndilaton.l_p = 0\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().size(), 5u) << e.what();
  }
}

TEST(Scenario, UnknownKeyNamed) {
  try {
    parse_scenario("model.m = 0.01\nmodel.mass = 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("model.mass"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Scenario, BadValuesRejected) {
  EXPECT_THROW(parse_scenario("model.m = abc\n"), ParseError);
  EXPECT_THROW(parse_scenario("toggles.literal_force = yes\n"), ParseError);
  EXPECT_THROW(parse_scenario("integration.stride = 1.5\n"), ParseError);
  EXPECT_THROW(parse_scenario("integration.step_mode = rk45\n"), ParseError);
}

TEST(Scenario, ConfigTextRoundTrips) {
  auto s = parse_scenario(short_run + "nucleation.e_coeff = 2\ntoggles.kinetic_friedmann = true\n");
  const auto text = to_config_text(s);
  const auto again = parse_scenario(text);
  EXPECT_EQ(to_config_text(again), text);
  EXPECT_EQ(to_json(again), to_json(s));
  EXPECT_TRUE(again.toggles.kinetic_friedmann);
  EXPECT_FALSE(again.e_coeff_defaulted);
}

TEST(Scenario, CalibrationResolvesMass) {
  const auto s = parse_scenario("calibration.target_gap = 0.373\ncalibration.points = 1000\n");
  ASSERT_TRUE(s.calibration.has_value());
  EXPECT_NEAR(s.model.m, 0.17896576, 1e-7);
  EXPECT_NEAR(vacuum_report(s.model).gap, 0.373, 1e-6);
  EXPECT_NEAR(*s.model.phi_star, phi_star(s.model), 1e-15);
}

TEST(Scenario, CalibrationWithoutSolutionFails) {
  try {
    parse_scenario("calibration.target_gap = 1e9\ncalibration.points = 100\n");
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_EQ(e.type(), "calibration_empty");
  }
}

TEST(Csv, SeriesHeaderAndRoundTrip) {
  TimeSeries ts;
  ts.states = {{0.0, 1.5, -0.1, 1.0, 0.3, Regime::R1}, {0.1, 1.49, -0.1, 1.03, 0.29, Regime::R2}};
  ts.V = {0.2, 0.19};
  ts.efolds = {0.0, std::log(1.03)};
  ts.epsilon = {1.0, 1.1};
  std::ostringstream out;
  write_series_csv(out, ts);
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,phi,phi_dot,a,H,V,epsilon,efolds,regime");
  const auto t = parse_csv(text);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][t.column("regime")], "R2");
  EXPECT_EQ(*parse_double(t.rows[1][t.column("efolds")]), std::log(1.03));
  EXPECT_EQ(*parse_double(t.rows[0][t.column("phi_dot")]), -0.1);
}

TEST(Csv, LatticeTwoColumns) {
  LatticeField f{-1.0, 0.5, {0.0, 1.0, 2.0}};
  std::ostringstream out;
  write_lattice_csv(out, f);
  EXPECT_EQ(out.str(), "x,phi\n-1,0\n-0.5,1\n0,2\n");
}

TEST(Checksum, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Run, WritesArtifactsAndManifest) {
  const auto dir = scratch_dir("run_artifacts");
  const auto s = parse_scenario(short_run);
  const auto r = run(s, dir);
  ASSERT_TRUE(r.ok()) << r.manifest.dump(2);
  for (const char* f : {"vacuum.json", "series.csv", "manifest.json", "potential.svg", "series.svg", "scenario.cfg"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;

  const auto m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["tool"]["name"], "fvinf");
  EXPECT_EQ(m["choices"]["e_coeff"].get<double>(), std::numbers::e);
  EXPECT_TRUE(m["resolved"].contains("lambda0"));
  EXPECT_TRUE(m["resolved"].contains("alpha"));
  EXPECT_TRUE(m["resolved"].contains("a0_tilde"));
  for (const auto& o : m["outputs"])
    EXPECT_EQ(sha256_hex(slurp(dir / o["file"].get<std::string>())), o["sha256"].get<std::string>());
  EXPECT_LT(m["diagnostics"]["friedmann_max_residual"].get<double>(), 1e-8);
  EXPECT_EQ(m["diagnostics"]["regime_transitions"].size(), 1u);
}

TEST(Run, FirstRateSampleAfterPlanckTimeIsUnity) {
  const auto dir = scratch_dir("run_rate");
  ASSERT_TRUE(run(parse_scenario(short_run), dir).ok());
  const auto t = parse_csv(slurp(dir / "series.csv"));
  const auto tc = t.column("t"), ec = t.column("epsilon");
  for (const auto& row : t.rows) {
    if (*parse_double(row[tc]) >= 1.0) {
      EXPECT_NEAR(*parse_double(row[ec]), 1.0, 1e-12);
      break;
    }
  }
}

TEST(Run, PlotsProjectRecordedData) {
  const auto dir = scratch_dir("run_plots");
  ASSERT_TRUE(run(parse_scenario(short_run), dir).ok());
  const auto vac = json::parse(slurp(dir / "vacuum.json"));
  EXPECT_EQ(slurp(dir / "potential.svg"), io::detail::potential_plot(vac));
  EXPECT_EQ(vac["landscape"]["phi"].size(), io::detail::landscape_points);
}

TEST(Run, DeterministicAndReplayable) {
  const auto a = scratch_dir("run_det_a"), b = scratch_dir("run_det_b"), c = scratch_dir("run_det_c");
  const auto s = parse_scenario(short_run);
  ASSERT_TRUE(run(s, a).ok());
  ASSERT_TRUE(run(s, b).ok());
  for (const char* f : {"series.csv", "manifest.json", "vacuum.json", "series.svg"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;

  // Replaying the echoed scenario reproduces every checksum.
  ASSERT_TRUE(run(load_scenario((a / "scenario.cfg").string()), c).ok());
  const auto ma = json::parse(slurp(a / "manifest.json")), mc = json::parse(slurp(c / "manifest.json"));
  EXPECT_EQ(ma["outputs"], mc["outputs"]);
}

TEST(Run, PoleRecordedInManifest) {
  const auto dir = scratch_dir("run_pole");
  const auto s = parse_scenario("model.A = 1\nmodel.phi0_tilde = -1\nintegration.t0 = 1\nintegration.t_end = 4\n");
  const auto r = run(s, dir);
  EXPECT_EQ(r.exit_code, 2);
  const auto m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["status"], "failed");
  EXPECT_EQ(m["error"]["type"], "pole");
  EXPECT_EQ(m["error"]["t"].get<double>(), 1.0);
  EXPECT_FALSE(fs::exists(dir / "series.csv"));
}

TEST(Sweep, GridParsing) {
  const auto axes = parse_grid("model.m=0.1,0.2; model.phi0_tilde=3:4:3");
  ASSERT_EQ(axes.size(), 2u);
  EXPECT_EQ(axes[0].values, (std::vector<std::string>{"0.1", "0.2"}));
  EXPECT_EQ(axes[1].values, (std::vector<std::string>{"3", "3.5", "4"}));
  EXPECT_THROW(parse_grid(""), ParseError);
  EXPECT_THROW(parse_grid("model.m"), ParseError);
  EXPECT_THROW(parse_grid("model.m=1:2"), ParseError);
  EXPECT_THROW(parse_grid("model.m=1:2:0"), ParseError);
}

TEST(Sweep, ThreePointsOverMass) {
  const auto dir = scratch_dir("sweep3");
  const auto base = parse_config(short_run);
  const auto res = sweep(base, parse_grid("model.m=0.05,0.1,0.2"), dir, 3);
  EXPECT_EQ(res.exit_code(), 0);
  ASSERT_EQ(res.rows.size(), 3u);
  const auto t = parse_csv(slurp(dir / "summary.csv"));
  ASSERT_EQ(t.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto pd = dir / point_dir_name(i);
    ASSERT_TRUE(fs::exists(pd / "manifest.json"));
    const auto vac = json::parse(slurp(pd / "vacuum.json"));
    EXPECT_EQ(*parse_double(t.rows[i][t.column("gap")]), vac["gap"].get<double>());
    EXPECT_EQ(t.rows[i][t.column("index")], std::to_string(i));
  }
  const std::string first = slurp(dir / "summary.csv");
  sweep(base, parse_grid("model.m=0.05,0.1,0.2"), dir, 1);
  EXPECT_EQ(slurp(dir / "summary.csv"), first);
}

TEST(Sweep, PartialFailureReported) {
  const auto dir = scratch_dir("sweep_fail");
  const auto res = sweep(parse_config(short_run), parse_grid("model.m=0.1,-1,0.9"), dir, 2);
  EXPECT_EQ(res.failures, 2u);
  EXPECT_NE(res.exit_code(), 0);
  const auto t = parse_csv(slurp(dir / "summary.csv"));
  EXPECT_EQ(t.rows[0][t.column("status")], "ok");
  EXPECT_EQ(t.rows[1][t.column("status")], "failed");
  EXPECT_EQ(t.rows[2][t.column("status")], "failed");
  EXPECT_TRUE(fs::exists(dir / point_dir_name(1) / "manifest.json"));
}

TEST(Commands, ReportDetectsTampering) {
  const auto dir = scratch_dir("report");
  ASSERT_TRUE(run(parse_scenario(short_run), dir).ok());
  std::ostringstream out, err;
  EXPECT_EQ(cmd_report(dir, out, err), 0);
  EXPECT_NE(out.str().find("series.csv: ok"), std::string::npos);
  std::ofstream(dir / "series.csv", std::ios::app) << "tampered\n";
  EXPECT_EQ(cmd_report(dir, out, err), 3);
  fs::remove(dir / "manifest.json");
  EXPECT_EQ(cmd_report(dir, out, err), 3);
}

TEST(Commands, CalibrateListsSolutions) {
  const auto dir = scratch_dir("cmd_cal");
  const auto cfg = write_cfg(dir, "c.cfg", "calibration.points = 500\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_calibrate(cfg.string(), 0.373, out, err), 0);
  const auto j = json::parse(out.str());
  ASSERT_GE(j["count"].get<int>(), 1);
  for (const auto& m : j["masses"]) {
    ModelParams p;
    p.m = m.get<double>();
    EXPECT_NEAR(vacuum_report(p).gap, 0.373, 1e-6);
  }
  std::ostringstream out2;
  EXPECT_EQ(cmd_calibrate(cfg.string(), 1e9, out2, err), 0);
  const auto empty = json::parse(out2.str());
  EXPECT_EQ(empty["count"], 0);
  EXPECT_EQ(empty["scan"]["m_lo"], 1e-3);
  EXPECT_EQ(cmd_calibrate(cfg.string(), -1.0, out2, err), 1);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  const auto good = write_cfg(dir, "good.cfg", short_run);
  const auto bad = write_cfg(dir, "bad.cfg", "model.m = -1\n");
  const auto unknown = write_cfg(dir, "unknown.cfg", "model.mass = 1\n");
  const auto pole = std::string(FVINF_SCENARIOS) + "/pole.cfg";

  EXPECT_EQ(cli("vacuum " + good.string()), 0);
  EXPECT_EQ(cli("vacuum " + bad.string()), 1);
  EXPECT_EQ(cli("vacuum " + unknown.string()), 1);
  EXPECT_EQ(cli("vacuum " + (dir / "missing.cfg").string()), 3);
  EXPECT_EQ(cli("simulate " + good.string() + " --out " + (dir / "run").string()), 0);
  EXPECT_EQ(cli("report " + (dir / "run").string()), 0);
  EXPECT_EQ(cli("report " + (dir / "nowhere").string()), 3);
  EXPECT_EQ(cli("simulate " + pole + " --out " + (dir / "pole").string()), 2);
  EXPECT_EQ(cli("report " + (dir / "pole").string()), 2);
  EXPECT_EQ(cli("sweep " + good.string() + " --grid 'model.m=0.1,0.2' --out " + (dir / "sweep").string()), 0);
  EXPECT_EQ(cli("sweep " + good.string() + " --grid 'model.m=0.1,-1' --out " + (dir / "sweep2").string()), 2);
  EXPECT_EQ(cli("calibrate " + good.string() + " --target-gap 0.373"), 0);
  EXPECT_EQ(cli("frobnicate"), 1);
  EXPECT_EQ(cli("simulate " + good.string()), 1);
}

TEST(Cli, SampleScenariosLoad) {
  for (const auto& entry : fs::directory_iterator(FVINF_SCENARIOS)) {
    if (entry.path().extension() != ".cfg") continue;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_vacuum(entry.path().string(), out, err), 0) << entry.path() << err.str();
  }
}
