#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dsglab/chart.hpp"
#include "dsglab/cli.hpp"
#include "dsglab/config.hpp"
#include "dsglab/csv.hpp"

using namespace dsglab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "dsglab_test";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const fs::path p = temp_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("empty config yields the documented defaults") {
    const Scenario sc = parse_config("");
    CHECK(sc.grid.f_base == 50.0);
    CHECK(sc.grid.X_line == 0.2);
    CHECK(sc.grid.X_g == 0.06);
    CHECK(sc.dsg.K_p == 0.02);
    CHECK(sc.dsg.K_Q == 0.06);
    CHECK(sc.dsg.K_V == 0.01);
    CHECK(sc.dsg.I_max == 1.05);
    CHECK(sc.dsg.I_nom == 1.0);
    CHECK(sc.dt == 1e-4);
    CHECK(sc == Scenario{});
}

TEST_CASE("config parse errors carry diagnostics") {
    CHECK_THROWS_WITH_AS(parse_config("grid.bogus = 1\n"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("dt = 0.01\n"),
                         doctest::Contains("dt must lie in (0, 1e-3]"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("grid.U = abc\n"),
                         doctest::Contains("not a number"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("grid.U\n"), doctest::Contains("expected"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("events[1].t = 0.5\nevents[1].kind = reconnect_to_grid\n"),
                         doctest::Contains("contiguous"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("events[0].t = 0.5\nevents[0].kind = explode\n"),
                         doctest::Contains("unknown kind"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("events[0].t = 0.5\nevents[0].kind = power_ref_step\nevents[0].U = 1\n"),
        doctest::Contains("requires field 'P'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = island\n"),
                         doctest::Contains("requires a load"), ConfigError);
}

TEST_CASE("comments, blank lines and whitespace are accepted") {
    const Scenario sc = parse_config(
        "# experiment\n"
        "\n"
        "  dsg.P_ref   =  0.75   # tracking target\n"
        "grid.U=0.95\n");
    CHECK(sc.dsg.P_ref == 0.75);
    CHECK(sc.grid.U == 0.95);
}

TEST_CASE("serialize then parse is the identity") {
    for (const auto& name : builtin_names()) {
        const Scenario sc = builtin_scenario(name);
        CHECK(parse_config(serialize_config(sc)) == sc);
    }

    Scenario sc;
    sc.mode0 = OperatingMode::Islanded;
    sc.load = LoadParams{0.437213951, 0.11};
    sc.dsg.P_ref = 1.0 / 3.0;
    sc.dsg.sync = SyncKind::Inertial;
    sc.dsg.qv_input = QvInput::ReactivePower;
    sc.dsg.qv_dyn = QvDynamics::Inertial;
    sc.init = InitPolicy::Explicit;
    sc.init_state = DsgState{0.1234567890123456, 0.001, 0.9, -0.03, 0.02};
    sc.t_end = 2.0;
    sc.events = {{0.5, EventKind::ReconnectToGrid, 0.0, {}},
                 {1.0, EventKind::SwitchToIsland, 0.0, LoadParams{0.9, 0.1}},
                 {1.5, EventKind::VoltageRefStep, 0.98, {}}};
    CHECK(parse_config(serialize_config(sc)) == sc);
}

TEST_CASE("defaults dump is byte-stable") {
    const std::string a = serialize_config(Scenario{});
    const std::string b = serialize_config(Scenario{});
    CHECK(a == b);
    CHECK(a.substr(0, 12) == "mode = grid\n");
    CHECK(a.find("dsg.K_p = 0.02") != std::string::npos);
    CHECK(a.find("grid.X_line = 0.2") != std::string::npos);
    CHECK(a.find("grid.f_base = 50") != std::string::npos);
}

TEST_CASE("overriding the braking gain turns fig6b into fig6a") {
    Scenario sc = builtin_scenario("fig6b");
    apply_override(sc, "dsg.K_Q", "0");
    CHECK(sc == builtin_scenario("fig6a"));
    CHECK_THROWS_AS(apply_override(sc, "nope", "1"), ConfigError);
    CHECK_THROWS_AS(builtin_scenario("fig9"), ConfigError);
}

TEST_CASE("built-in scenarios carry the documented disturbances") {
    const Scenario f6b = builtin_scenario("fig6b");
    CHECK(f6b.dsg.P_ref == 0.8);
    CHECK(f6b.dsg.K_Q == 0.06);
    REQUIRE(f6b.events.size() == 2);
    CHECK(f6b.events[0].t == 1.0);
    CHECK(f6b.events[0].kind == EventKind::GridVoltageStep);
    CHECK(f6b.events[0].value == 0.6);
    CHECK(f6b.events[1].value == 1.0);

    const Scenario f5a = builtin_scenario("fig5a");
    CHECK(f5a.dsg.K_Q == 0.0);
    CHECK(f5a.events[0].value == 0.8);

    const Scenario f4 = builtin_scenario("fig4");
    REQUIRE(f4.events.size() == 4);
    CHECK(f4.dsg.P_ref == 0.3);
    CHECK(f4.events.back().kind == EventKind::PowerRefStep);
    CHECK(f4.events.back().value == 1.05);
    CHECK(f4.dsg.I_nom == f4.dsg.I_max);

    const Scenario f8 = builtin_scenario("fig8");
    CHECK(f8.mode0 == OperatingMode::Islanded);
    REQUIRE(f8.load.has_value());
    CHECK(f8.load->P_load == 1.0);
    CHECK(f8.load->Q_load == 0.2);
    CHECK(f8.events.empty());

    for (const auto& name : builtin_names()) {
        CHECK_NOTHROW(builtin_scenario(name).validate());
    }
}

TEST_CASE("csv writer format") {
    TimeSeries ts;
    ts.push_row(0.0, 0.1, 50.0, 0.3, -0.1, 1.0, 1.05, 0, 0.3);
    ts.push_row(1e-4, 0.1000001, 50.0, 0.30001, -0.1, 0.99999999999, 1.05, 1, 0.31);
    ts.push_row(2e-4, 1.0 / 3.0, 49.991234567890123, 0.3, -0.1, 1.0, 1.05, 0, 0.3);

    const std::string path = (temp_dir() / "ts.csv").string();
    write_timeseries(ts, path);
    const std::string text = slurp(path);

    CHECK(text.substr(0, 42) == "t,delta_1,freq,P_E,Q_E,V_mag,I_d,sign,S\n0,");
    CHECK(text.find('\r') == std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);

    const TimeSeries back = read_timeseries(path);
    REQUIRE(back.size() == ts.size());
    for (std::size_t c = 0; c < TimeSeries::kNumColumns; ++c) {
        CHECK(back.column(c) == ts.column(c));  // bitwise round trip
    }

    TimeSeries empty;
    const std::string epath = (temp_dir() / "empty.csv").string();
    write_timeseries(empty, epath);
    CHECK(slurp(epath) == "t,delta_1,freq,P_E,Q_E,V_mag,I_d,sign,S\n");
    CHECK(read_timeseries(epath).empty());

    CHECK_THROWS(write_timeseries(ts, "/nonexistent-dir/x/y.csv"));
}

TEST_CASE("chart emission") {
    TimeSeries ts;
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.01 * k;
        ts.push_row(t, t * t, 50.0, std::sin(t), 0, 1, 1, 0, std::sin(t));
    }
    const std::string path = (temp_dir() / "chart.svg").string();
    emit_chart(chart_from_timeseries(ts, {"delta_1", "P_E"}, "test"), path);
    const std::string svg = slurp(path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(std::count(svg.begin(), svg.end(), '<') > 10);
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) { ++polylines; ++pos; }
    CHECK(polylines == 2);
    CHECK(svg.find(">delta_1<") != std::string::npos);  // legend entries
    CHECK(svg.find(">P_E<") != std::string::npos);

    CHECK_THROWS_AS(emit_chart(ChartData{}, path), std::invalid_argument);
    CHECK_THROWS_AS(chart_from_timeseries(ts, {"bogus"}, "x"), std::invalid_argument);

    std::vector<CurvePoint> curve;
    for (int k = 0; k <= 50; ++k) curve.push_back({-3.0 + 0.12 * k, std::sin(-3.0 + 0.12 * k)});
    const std::string cpath = (temp_dir() / "curve.svg").string();
    emit_chart(chart_from_curve(curve, "P", "power-angle curve"), cpath);
    const std::string csvg = slurp(cpath);
    std::size_t cpoly = 0;
    pos = 0;
    while ((pos = csvg.find("<polyline", pos)) != std::string::npos) { ++cpoly; ++pos; }
    CHECK(cpoly == 1);
}

TEST_CASE("cli exit codes") {
    const std::string out = (temp_dir() / "cli_out").string();

    // usage errors
    CHECK(run_cli({"bogus-subcommand"}) == kExitUsage);
    CHECK(run_cli({"simulate"}) == kExitUsage);
    CHECK(run_cli({"simulate", (temp_dir() / "missing.cfg").string()}) == kExitUsage);

    // config error
    const std::string bad = write_file("bad.cfg", "dt = 0.5\n");
    CHECK(run_cli({"simulate", bad}) == kExitUsage);

    // a small healthy run
    const std::string ok = write_file("ok.cfg",
                                      "dsg.P_ref = 0.5\n"
                                      "dsg.I_nom = 1.05\n"
                                      "dsg.K_Q = 0\n"
                                      "t_end = 0.2\n");
    CHECK(run_cli({"simulate", ok, "-o", out, "--chart"}) == kExitOk);
    CHECK(fs::exists(fs::path(out) / "ok.csv"));
    CHECK(fs::exists(fs::path(out) / "ok.svg"));

    // numerical failure
    const std::string diverge = write_file("diverge.cfg",
                                           "dsg.sync = inertial\n"
                                           "dsg.J = 1e-9\n"
                                           "init = explicit\n"
                                           "init.delta_1 = 0.3\n"
                                           "init.I_d = 1\n"
                                           "dt = 1e-3\n"
                                           "t_end = 0.05\n");
    CHECK(run_cli({"simulate", diverge}) == kExitNumerical);

    // analysis commands
    CHECK(run_cli({"check-braking", ok}) == kExitOk);
    CHECK(run_cli({"equilibria", ok}) == kExitOk);
    CHECK(run_cli({"curve", ok, "-o", out, "--braking", "--chart"}) == kExitOk);
    CHECK(fs::exists(fs::path(out) / "curve_braking.csv"));

    CHECK(run_cli({"--print-defaults"}) == kExitOk);
}

TEST_CASE("repro exit codes encode the braking contrast") {
    const std::string out = (temp_dir() / "repro_out").string();
    CHECK(run_cli({"repro", "fig6a", "-o", out}) == kExitLos);
    CHECK(fs::exists(fs::path(out) / "fig6a.csv"));
    CHECK(run_cli({"repro", "fig6b", "-o", out}) == kExitOk);
    CHECK(run_cli({"repro", "fig9", "-o", out}) == kExitUsage);
}
