#include "dsglab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dsglab/chart.hpp"
#include "dsglab/config.hpp"
#include "dsglab/csv.hpp"
#include "dsglab/sim.hpp"
#include "dsglab/stability.hpp"

namespace dsglab {

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("DSG_LAB_OUT"); env != nullptr && *env != '\0') {
        return env;
    }
    return ".";
}

void apply_overrides(Scenario& sc, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        }
        apply_override(sc, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

Scenario load_scenario(const std::string& cfg_path, const std::vector<std::string>& sets) {
    Scenario sc = parse_config(slurp(cfg_path));
    apply_overrides(sc, sets);
    return sc;
}

BrakingCurveParams curve_params(const Scenario& sc) {
    return {sc.grid.U * sc.dsg.I_max, sc.dsg.K_Q / sc.dsg.K_p, sc.grid.U,
            sc.grid.reactance(), sc.dsg.I_max, sc.dsg.P_ref};
}

struct RunResult {
    TimeSeries ts;
    std::vector<LosEvent> los;
};

RunResult run_and_export(const Scenario& sc, const std::string& stem,
                         const std::string& out_dir, bool chart) {
    RunResult r;
    r.ts = integrate(sc);
    r.los = detect_los(r.ts);
    fs::create_directories(out_dir);
    const std::string csv_path = (fs::path(out_dir) / (stem + ".csv")).string();
    write_timeseries(r.ts, csv_path);
    std::cout << "wrote " << csv_path << " (" << r.ts.size() << " samples)\n";
    if (chart) {
        const std::string svg_path = (fs::path(out_dir) / (stem + ".svg")).string();
        emit_chart(chart_from_timeseries(r.ts, {"delta_1", "P_E", "V_mag", "freq"}, stem),
                   svg_path);
        std::cout << "wrote " << svg_path << '\n';
    }
    return r;
}

void print_summary(const RunResult& r) {
    const TimeSeries& ts = r.ts;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "final: t=%.6g delta_1=%.6g rad  P_E=%.6g  Q_E=%.6g  V=%.6g  I_d=%.6g  f=%.6g Hz",
                  ts.t.back(), ts.delta_1.back(), ts.p_e.back(), ts.q_e.back(),
                  ts.v_mag.back(), ts.i_d.back(), ts.freq.back());
    std::cout << buf << '\n';
    if (r.los.empty()) {
        std::cout << "synchronization: held (no pole slip)\n";
    } else {
        std::snprintf(buf, sizeof buf, "synchronization: LOST at t=%.6g s (excursion %.6g rad)",
                      r.los.front().t, r.los.front().excursion);
        std::cout << buf << '\n';
    }
}

int cmd_simulate(const std::string& cfg, const std::string& out_flag, bool chart,
                 const std::vector<std::string>& sets) {
    const Scenario sc = load_scenario(cfg, sets);
    const std::string stem = fs::path(cfg).stem().string();
    const RunResult r = run_and_export(sc, stem.empty() ? "run" : stem,
                                       output_dir(out_flag), chart);
    print_summary(r);
    return r.los.empty() ? kExitOk : kExitLos;
}

int cmd_curve(const std::string& cfg, bool braking, const std::string& out_flag,
              bool chart, const std::vector<std::string>& sets) {
    const Scenario sc = load_scenario(cfg, sets);
    const BrakingCurveParams params = curve_params(sc);
    const int n = 4096;
    std::vector<CurvePoint> pts;
    pts.reserve(n);
    if (braking) {
        for (const auto& p : power_angle_curve(sc.dsg.I_max, sc.grid, n)) {
            pts.push_back({p.delta_1, revised_power(p.delta_1, params)});
        }
    } else {
        pts = power_angle_curve(sc.dsg.I_max, sc.grid, n);
    }
    const std::string out = output_dir(out_flag);
    fs::create_directories(out);
    const std::string name = braking ? "S" : "P";
    const std::string csv_path =
        (fs::path(out) / (braking ? "curve_braking.csv" : "curve.csv")).string();
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error(csv_path + ": cannot open for writing");
        f << "delta_1," << name << '\n';
        char buf[80];
        for (const auto& p : pts) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.delta_1, p.value);
            f << buf;
        }
    }
    std::cout << "wrote " << csv_path << '\n';
    if (chart) {
        const std::string svg_path =
            (fs::path(out) / (braking ? "curve_braking.svg" : "curve.svg")).string();
        emit_chart(chart_from_curve(pts, name, braking ? "revised power-angle curve"
                                                       : "power-angle curve"),
                   svg_path);
        std::cout << "wrote " << svg_path << '\n';
    }
    char buf[192];
    std::snprintf(buf, sizeof buf, "P_m=%.6g", params.P_m);
    std::cout << buf;
    if (braking) {
        std::snprintf(buf, sizeof buf, "  P_m'=%.6g  alpha=%.6g rad  S_max=%.6g",
                      params.p_m_prime(), params.alpha(), s_max(params));
        std::cout << buf;
    }
    std::snprintf(buf, sizeof buf, "  P_ref=%.6g", params.P_ref);
    std::cout << buf << '\n';
    return kExitOk;
}

int cmd_equilibria(const std::string& cfg, const std::vector<std::string>& sets) {
    const Scenario sc = load_scenario(cfg, sets);
    const BrakingCurveParams params = curve_params(sc);
    for (bool braking : {false, true}) {
        const auto eqs = find_equilibria(sc.dsg.P_ref, params, braking);
        char buf[160];
        if (eqs.empty()) {
            std::snprintf(buf, sizeof buf, "braking=%-3s  none (P_ref above the curve peak)",
                          braking ? "on" : "off");
            std::cout << buf << '\n';
            continue;
        }
        for (const auto& e : eqs) {
            std::snprintf(buf, sizeof buf, "braking=%-3s  delta_1=%+.9f rad  slope=%+.6f  %s",
                          braking ? "on" : "off", e.delta_1, e.curve_slope,
                          e.stable ? "stable" : "unstable");
            std::cout << buf << '\n';
        }
    }
    return kExitOk;
}

int cmd_check_braking(const std::string& cfg, const std::vector<std::string>& sets) {
    const Scenario sc = load_scenario(cfg, sets);
    const auto res = braking_gain_criterion(sc.dsg.K_Q, sc.dsg.K_p, sc.dsg.P_ref,
                                            sc.dsg.I_max, sc.grid.reactance());
    char buf[96];
    std::snprintf(buf, sizeof buf, "K_Q/K_p = %.12g", sc.dsg.K_Q / sc.dsg.K_p);
    std::cout << buf << '\n';
    std::snprintf(buf, sizeof buf, "P_ref/(I_max*X) = %.12g",
                  sc.dsg.P_ref / (sc.dsg.I_max * sc.grid.reactance()));
    std::cout << buf << '\n';
    std::cout << "holds = " << (res.holds ? "yes" : "no") << '\n';
    std::snprintf(buf, sizeof buf, "margin = %.12g", res.margin);
    std::cout << buf << '\n';
    return kExitOk;
}

int cmd_repro(const std::string& name, const std::string& out_flag, bool chart,
              const std::vector<std::string>& sets) {
    std::vector<std::string> names;
    if (name == "all") {
        names = builtin_names();
    } else {
        names.push_back(name);
    }
    int exit_code = kExitOk;
    for (const auto& fig : names) {
        Scenario sc = builtin_scenario(fig);
        apply_overrides(sc, sets);
        std::cout << "--- " << fig << " ---\n";
        const RunResult r = run_and_export(sc, fig, output_dir(out_flag), chart);
        print_summary(r);
        if (name != "all" && !r.los.empty()) exit_code = kExitLos;
    }
    return exit_code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"dsg-lab: phasor-domain simulator for current-source grid-forming control"};
    app.require_subcommand(0, 1);

    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults,
                 "print the default scenario config and exit");

    std::string cfg, out_flag, repro_name;
    bool chart = false, braking = false;
    std::vector<std::string> sets;

    auto add_common = [&](CLI::App* sub, bool needs_cfg) {
        if (needs_cfg) {
            sub->add_option("config", cfg, "scenario config file")->required();
        }
        sub->add_option("-o,--out", out_flag, "output directory (default $DSG_LAB_OUT or .)");
        sub->add_flag("--chart", chart, "also emit an SVG chart");
        sub->add_option("--set", sets, "override a config key (key=value), repeatable");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "integrate a scenario and export CSV");
    add_common(simulate, true);

    CLI::App* curve = app.add_subcommand("curve", "export the power-angle curve");
    add_common(curve, true);
    curve->add_flag("--braking", braking, "revised curve with the braking term");

    CLI::App* equilibria = app.add_subcommand("equilibria", "locate and classify equilibria");
    equilibria->add_option("config", cfg, "scenario config file")->required();
    equilibria->add_option("--set", sets, "override a config key (key=value), repeatable");

    CLI::App* check = app.add_subcommand("check-braking", "evaluate the braking-gain criterion");
    check->add_option("config", cfg, "scenario config file")->required();
    check->add_option("--set", sets, "override a config key (key=value), repeatable");

    CLI::App* repro = app.add_subcommand(
        "repro", "run a built-in reproduction scenario (exit 3 when it loses synchronization)");
    repro->add_option("name", repro_name, "fig4|fig5a|fig5b|fig6a|fig6b|fig8|all")->required();
    add_common(repro, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (print_defaults) {
            std::cout << serialize_config(Scenario{});
            return kExitOk;
        }
        if (simulate->parsed()) return cmd_simulate(cfg, out_flag, chart, sets);
        if (curve->parsed()) return cmd_curve(cfg, braking, out_flag, chart, sets);
        if (equilibria->parsed()) return cmd_equilibria(cfg, sets);
        if (check->parsed()) return cmd_check_braking(cfg, sets);
        if (repro->parsed()) return cmd_repro(repro_name, out_flag, chart, sets);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SimError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace dsglab
