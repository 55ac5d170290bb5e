#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acsf/errors.hpp"
#include "acsf/harness.hpp"

namespace {

using namespace acsf;

std::vector<int> parse_levels(const std::string& csv) {
    std::vector<int> levels;
    std::string token;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!token.empty()) levels.push_back(std::stoi(token));
            token.clear();
        } else {
            token += c;
        }
    }
    return levels;
}

// Reference errors from the two published convergence tables, J = 32..512.
struct Target {
    int J;
    double l2, h1;
};
const std::vector<Target> kTable1 = {{32, 1.2337e-02, 2.8140e-01},
                                     {64, 3.1870e-03, 1.4076e-01},
                                     {128, 8.0360e-04, 7.0386e-02},
                                     {256, 2.0133e-04, 3.5194e-02},
                                     {512, 5.0361e-05, 1.7597e-02}};
const std::vector<Target> kTable2 = {{32, 1.6096e-02, 3.5595e-01},
                                     {64, 4.2080e-03, 1.7805e-01},
                                     {128, 1.0635e-03, 8.9032e-02},
                                     {256, 2.6656e-04, 4.4517e-02},
                                     {512, 6.6685e-05, 2.2259e-02},
                                     {1024, 1.6674e-05, 1.1129e-02}};

int cmd_converge(const std::string& suite, const std::string& levels_csv,
                 const std::string& out) {
    const harness::Suite suite_id =
        suite == "table1" ? harness::Suite::Table1 : harness::Suite::Table2;
    const std::vector<int> levels = parse_levels(levels_csv);
    const harness::ConvergenceReport rep = harness::run_convergence(suite_id, levels, out);

    const auto& targets = suite_id == harness::Suite::Table1 ? kTable1 : kTable2;
    bool ok = true;
    std::printf("suite %s (%.1fs)\n", rep.suite.c_str(), rep.seconds);
    std::printf("%6s  %12s %8s  %12s %8s\n", "J", "l2", "eoc", "h1", "eoc");
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
        const auto& lv = rep.levels[i];
        std::printf("%6d  %12.4e %8s  %12.4e %8s\n", lv.J, lv.l2,
                    i ? std::to_string(rep.eoc_l2[i - 1]).substr(0, 4).c_str() : "-",
                    lv.h1, i ? std::to_string(rep.eoc_h1[i - 1]).substr(0, 4).c_str() : "-");
        for (const Target& t : targets) {
            if (t.J != lv.J) continue;
            if (std::abs(lv.l2 - t.l2) > 0.02 * t.l2 ||
                std::abs(lv.h1 - t.h1) > 0.02 * t.h1) {
                std::printf("        -> outside the 2%% band around (%.4e, %.4e)\n", t.l2,
                            t.h1);
                ok = false;
            }
        }
    }
    return ok ? 0 : 2;
}

int cmd_run_result(const harness::ShowcaseResult& res) {
    std::printf("%s: %s after %d steps, energy %s, max ratio %.3f\n", res.name.c_str(),
                res.status == schemes::FlowStatus::Completed ? "completed" : "extinct",
                res.steps_taken, res.energy_monotone ? "monotone" : "NOT monotone",
                res.max_ratio);
    bool ok = res.energy_monotone;
    if (res.terminal_deviation) {
        std::printf("  terminal deviation from the exact circle: %.3e\n",
                    *res.terminal_deviation);
        ok = ok && *res.terminal_deviation < 6e-3;
    }
    if (res.final_max_geodesic_curvature)
        std::printf("  final max |kappa_g|: %.3e\n", *res.final_max_geodesic_curvature);
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic curve shortening flow experiments"};
    app.require_subcommand(1);

    auto* converge = app.add_subcommand("converge", "run a convergence suite");
    std::string suite = "table1";
    std::string levels = "32,64,128,256";
    std::string out = "out";
    converge->add_option("--suite", suite, "table1 or table2")
        ->check(CLI::IsMember({"table1", "table2"}));
    converge->add_option("--levels", levels, "comma separated node counts");
    converge->add_option("--out", out, "output directory");

    auto* run = app.add_subcommand("run", "run a named preset or a JSON config");
    std::string preset, config, run_out = "out";
    int override_J = 0;
    double override_T = -1.0, override_dt = -1.0;
    run->add_option("--preset", preset, "preset name (see --list)");
    run->add_option("--config", config, "JSON config file");
    run->add_option("--out", run_out, "output directory");
    run->add_option("--J", override_J, "override node count");
    run->add_option("--T", override_T, "override final time");
    run->add_option("--dt", override_dt, "override time step");
    bool list_presets = false;
    run->add_flag("--list", list_presets, "list preset names and exit");

    auto* wulff = app.add_subcommand("wulff", "emit Frank/Wulff boundary samples");
    std::string model_file, wulff_out = "out";
    int samples = 720;
    wulff->add_option("--model", model_file, "model JSON file")->required();
    wulff->add_option("--samples", samples, "boundary sample count");
    wulff->add_option("--out", wulff_out, "output directory");

    auto* check = app.add_subcommand("check", "run the invariant suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (converge->parsed()) return cmd_converge(suite, levels, out);
        if (run->parsed()) {
            if (list_presets) {
                for (const auto& name : acsf::harness::preset_names())
                    std::printf("%s\n", name.c_str());
                return 0;
            }
            acsf::harness::ShowcaseOptions options;
            options.override_J = override_J;
            options.override_T = override_T;
            options.override_dt = override_dt;
            if (!preset.empty())
                return cmd_run_result(acsf::harness::run_showcase(preset, run_out, options));
            if (!config.empty())
                return cmd_run_result(acsf::harness::run_config_file(config, run_out));
            std::fprintf(stderr, "run: need --preset or --config\n");
            return 1;
        }
        if (wulff->parsed()) {
            for (const auto& f : acsf::harness::write_wulff_files(model_file, samples, wulff_out))
                std::printf("wrote %s\n", f.c_str());
            return 0;
        }
        if (check->parsed()) {
            bool ok = true;
            for (const auto& r : acsf::harness::run_checks()) {
                std::printf("%-4s %s (%s)\n", r.pass ? "ok" : "FAIL", r.name.c_str(),
                            r.detail.c_str());
                ok = ok && r.pass;
            }
            return ok ? 0 : 2;
        }
    } catch (const acsf::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
