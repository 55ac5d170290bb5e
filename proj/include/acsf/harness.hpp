#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acsf/anisotropy.hpp"
#include "acsf/exact.hpp"
#include "acsf/geom.hpp"
#include "acsf/io.hpp"
#include "acsf/schemes.hpp"

namespace acsf::harness {

/// Discrete energy E^h(chi) = (gamma(chi, chi_rho^perp), a(chi))^h.
double discrete_energy(const aniso::AnisotropyModel& model, const geom::DiscreteCurve& curve);

/// Experimental orders of convergence between consecutive mesh levels:
/// EOC_k = log(e_{k-1}/e_k) / log(J_k/J_{k-1}). Requires positive errors;
/// fewer than two levels yield an empty list.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<int>& levels);

enum class Suite { Table1, Table2 };

struct ConvergenceLevel {
    int J = 0;
    double l2 = 0.0;  // max over all time steps of the L2 error
    double h1 = 0.0;  // max over all time steps of the H1 error
};

struct ConvergenceReport {
    std::string suite;
    std::vector<ConvergenceLevel> levels;
    std::vector<double> eoc_l2;
    std::vector<double> eoc_h1;
    double seconds = 0.0;
    std::vector<std::string> files;
};

/// Convergence experiment against the closed-form reference flows, with time
/// steps tied to the mesh via dt ~= h^2 (dt = T/round(T J^2), so the horizon
/// is hit exactly). Levels run concurrently. Emits the error/EOC table as
/// CSV plus a JSON report into out_dir (pass "" to skip file output).
ConvergenceReport run_convergence(Suite suite, const std::vector<int>& levels,
                                  const std::string& out_dir);

struct ShowcaseOptions {
    int override_J = 0;         // 0 keeps the preset value
    double override_T = -1.0;   // < 0 keeps the preset value
    double override_dt = -1.0;  // < 0 keeps the preset value
    int series_stride = 10;
    bool write_files = true;
};

struct ShowcaseResult {
    std::string name;
    schemes::FlowStatus status = schemes::FlowStatus::Completed;
    int steps_taken = 0;
    /// Lumped potential energy non-increasing over every executed step
    /// (within 1e-12 relative slack); meaningful for unforced runs.
    bool energy_monotone = true;
    double max_ratio = 1.0;
    std::vector<io::SeriesRow> series;
    std::vector<Vec2> final_positions;
    double final_time = 0.0;
    /// max_j | |x_j - center(T)| - r(T) | for the hyperbolic circle preset.
    std::optional<double> terminal_deviation;
    /// max_j |kappa_g| on the final curve for runs on an embedded surface.
    std::optional<double> final_max_geodesic_curvature;
    std::vector<std::string> files;
};

std::vector<std::string> preset_names();

/// Runs a named experiment with its documented configuration, emitting
/// snapshots, series and a JSON report under out_dir.
ShowcaseResult run_showcase(const std::string& preset, const std::string& out_dir,
                            const ShowcaseOptions& options = {});

/// Runs an experiment described by a JSON config file (either a preset name
/// with overrides or a full scheme/model/metric/initial description).
ShowcaseResult run_config_file(const std::string& config_path, const std::string& out_dir);

/// Writes Frank and Wulff boundary samples of a space-independent model
/// described by a JSON file ({"variant": ..., ...}) into out_dir.
std::vector<std::string> write_wulff_files(const std::string& model_path, int samples,
                                           const std::string& out_dir);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The invariant suites behind `acsf check`: derivative consistency,
/// homogeneity and structure identities, stability and reduction properties.
std::vector<CheckResult> run_checks();

}  // namespace acsf::harness
