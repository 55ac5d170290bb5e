#include "acsf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "acsf/errors.hpp"
#include "acsf/metric.hpp"

namespace acsf::harness {

using aniso::AnisotropyModel;
using geom::DiscreteCurve;
using json = nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;
}

double discrete_energy(const AnisotropyModel& model, const DiscreteCurve& curve) {
    const int J = curve.size();
    double s = 0.0;
    for (int j = 0; j < J; ++j) {
        const int jm = curve.mesh.prev(j);
        const Vec2 q = (curve.chord(j) * static_cast<double>(J)).perp();
        s += model.value(curve.positions[j], q) * model.weight(curve.positions[j]) +
             model.value(curve.positions[jm], q) * model.weight(curve.positions[jm]);
    }
    return 0.5 * curve.mesh.h() * s;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<int>& levels) {
    if (errors.size() != levels.size())
        throw ConfigError("eoc: errors and levels must have the same length");
    for (double e : errors)
        if (!(e > 0.0)) throw DomainError("eoc: errors must be positive");
    std::vector<double> out;
    for (std::size_t k = 1; k < errors.size(); ++k)
        out.push_back(std::log(errors[k - 1] / errors[k]) /
                      std::log(static_cast<double>(levels[k]) / levels[k - 1]));
    return out;
}

// ---------------------------------------------------------------------------
// Shared run loop: series rows, snapshots, stability bookkeeping.
// ---------------------------------------------------------------------------

namespace {

AnisotropyModel energy_model(const schemes::FlowConfig& flow) {
    if (flow.model) return *flow.model;
    return AnisotropyModel::metric_induced(flow.field);
}

std::string scheme_name(schemes::Scheme s) {
    switch (s) {
        case schemes::Scheme::FdAni: return "fdani";
        case schemes::Scheme::FdBgn: return "fdbgn";
        case schemes::Scheme::FdRiem: return "fdriem";
        case schemes::Scheme::FdHypbol: return "fdhypbol";
    }
    return "?";
}

struct RunRecorder {
    explicit RunRecorder(AnisotropyModel m) : model(std::move(m)) {}

    const AnisotropyModel model;
    int stride = 10;
    int final_step = 0;
    bool with_errors = false;
    const ExactSolution* exact = nullptr;

    std::vector<io::SeriesRow> rows;
    bool monotone = true;
    double worst_slack = 0.0;
    double max_ratio = 1.0;
    double max_l2 = 0.0;
    double max_h1 = 0.0;

    // Snapshot emission.
    std::string out_dir;
    std::set<int> snapshot_steps;
    const metric::MetricField* embed_field = nullptr;
    std::vector<std::string> files;
    std::vector<std::vector<Vec2>> overlay;

    void observe(int step, const DiscreteCurve& curve, const schemes::StepReport* rep) {
        if (rep) {
            const double slack = 1e-12 * (1.0 + std::abs(rep->phi_energy_before));
            if (rep->phi_energy_after > rep->phi_energy_before + slack) {
                monotone = false;
                worst_slack =
                    std::max(worst_slack, rep->phi_energy_after - rep->phi_energy_before);
            }
        }
        const double r = geom::ratio(curve);
        max_ratio = std::max(max_ratio, r);

        std::optional<double> l2, h1;
        if (with_errors) {
            const geom::ErrorNorms en = geom::error_norms(curve, exact->at_time(curve.time));
            max_l2 = std::max(max_l2, en.l2);
            max_h1 = std::max(max_h1, en.h1);
            l2 = en.l2;
            h1 = en.h1;
        }
        if (step % stride == 0 || step == final_step) {
            io::SeriesRow row;
            row.step = step;
            row.t = curve.time;
            row.energy = discrete_energy(model, curve);
            row.ratio = r;
            row.newton_iters = rep ? rep->newton_iterations : 0;
            row.l2 = l2;
            row.h1 = h1;
            rows.push_back(row);
        }
        if (!out_dir.empty() && snapshot_steps.count(step)) {
            const std::string base = out_dir + "/snap_" + std::to_string(step);
            io::write_svg(base + ".svg", {curve.positions});
            files.push_back(base + ".svg");
            io::write_curve_csv(base + ".csv", curve);
            files.push_back(base + ".csv");
            if (embed_field) {
                io::write_points3_csv(base + "_3d.csv",
                                      metric::graph_embed(*embed_field, curve));
                files.push_back(base + "_3d.csv");
            }
            overlay.push_back(curve.positions);
        }
    }

    // all snapshots in one picture, like the published evolution plots
    void write_overlay() {
        if (out_dir.empty() || overlay.size() < 2) return;
        io::write_svg(out_dir + "/evolution.svg", overlay);
        files.push_back(out_dir + "/evolution.svg");
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Convergence suites.
// ---------------------------------------------------------------------------

namespace {

struct LevelOutput {
    ConvergenceLevel level;
    std::vector<io::SeriesRow> rows;
};

LevelOutput run_level(Suite suite, int J) {
    schemes::FlowConfig flow;
    double T = 0.0;
    std::optional<ExactSolution> exact;
    if (suite == Suite::Table1) {
        const AnisotropyModel model = AnisotropyModel::elliptic(0.5);
        exact = ExactSolution::wulff_ellipse(0.5);
        T = 0.45;
        flow.scheme = schemes::Scheme::FdAni;
        flow.model = model;
        flow.forcing = schemes::manufactured_forcing(model, *exact);
    } else {
        flow.scheme = schemes::Scheme::FdRiem;
        flow.field = metric::make_cone(std::sqrt(3.0));
        exact = ExactSolution::cone_circle(std::sqrt(3.0), 1.0);
        T = 0.5;
    }
    const long M = std::lround(T * J * J);  // dt = h^2, rounded so M dt = T exactly
    flow.dt = T / static_cast<double>(M);
    flow.steps = static_cast<int>(M);

    RunRecorder rec{energy_model(flow)};
    rec.stride = std::max(1, static_cast<int>(M / 200));
    rec.final_step = flow.steps;
    rec.with_errors = true;
    rec.exact = &*exact;

    const DiscreteCurve initial = exact->interpolate(J, 0.0);
    schemes::run_flow(initial, flow,
                      {[&](int s, const DiscreteCurve& c, const schemes::StepReport* r) {
                          rec.observe(s, c, r);
                      }});
    return {{J, rec.max_l2, rec.max_h1}, std::move(rec.rows)};
}

}  // namespace

ConvergenceReport run_convergence(Suite suite, const std::vector<int>& levels,
                                  const std::string& out_dir) {
    if (levels.empty()) throw ConfigError("run_convergence: no levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1])
            throw ConfigError("run_convergence: levels must be ascending");

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::future<LevelOutput>> futures;
    for (int J : levels)
        futures.push_back(std::async(std::launch::async, run_level, suite, J));

    ConvergenceReport report;
    report.suite = suite == Suite::Table1 ? "table1" : "table2";
    std::vector<LevelOutput> outputs;
    for (auto& f : futures) outputs.push_back(f.get());
    for (const auto& o : outputs) report.levels.push_back(o.level);

    std::vector<double> l2s, h1s;
    for (const auto& lv : report.levels) {
        l2s.push_back(lv.l2);
        h1s.push_back(lv.h1);
    }
    if (levels.size() >= 2) {
        report.eoc_l2 = eoc(l2s, levels);
        report.eoc_h1 = eoc(h1s, levels);
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!out_dir.empty()) {
        io::ensure_directory(out_dir);
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            const std::string p =
                out_dir + "/series_J" + std::to_string(levels[i]) + ".csv";
            io::write_series_csv(p, outputs[i].rows);
            report.files.push_back(p);
        }
        const std::string table_path = out_dir + "/" + report.suite + ".csv";
        {
            std::ofstream out(table_path);
            out << "J,l2,eoc_l2,h1,eoc_h1\n";
            for (std::size_t i = 0; i < report.levels.size(); ++i) {
                out << report.levels[i].J << ',' << io::format_double(report.levels[i].l2)
                    << ',';
                if (i) out << io::format_double(report.eoc_l2[i - 1]);
                out << ',' << io::format_double(report.levels[i].h1) << ',';
                if (i) out << io::format_double(report.eoc_h1[i - 1]);
                out << '\n';
            }
        }
        report.files.push_back(table_path);

        json rep;
        rep["config"] = {{"suite", report.suite},
                         {"levels", levels},
                         {"dt_rule", "T/round(T*J^2)"},
                         {"T", suite == Suite::Table1 ? 0.45 : 0.5},
                         {"scheme", suite == Suite::Table1 ? "fdani" : "fdriem"}};
        rep["series"] = {{"files", report.files}};
        rep["errors"] = {{"J", levels}, {"l2", l2s}, {"h1", h1s}};
        rep["eoc"] = {{"l2", report.eoc_l2}, {"h1", report.eoc_h1}};
        rep["status"] = "ok";
        const std::string jp = out_dir + "/" + report.suite + "_report.json";
        std::ofstream(jp) << rep.dump(2) << '\n';
        report.files.push_back(jp);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Presets.
// ---------------------------------------------------------------------------

namespace {

struct Preset {
    std::string name;
    schemes::FlowConfig flow;  // dt/model/field set; steps derived from T
    int J = 128;
    double T = 0.0;
    std::function<DiscreteCurve(int)> initial;
    std::vector<double> snapshot_times;
    bool embed3d = false;
    bool hyperbolic_deviation = false;
    bool report_kappa_g = false;
};

std::vector<double> arange(double from, double to, double step) {
    std::vector<double> out;
    for (double t = from; t < to + 0.5 * step; t += step) out.push_back(t);
    return out;
}

DiscreteCurve make_ellipse_equidistributed(int J, double a, double b) {
    std::vector<Vec2> dense(4096);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        const double th = 2.0 * kPi * i / dense.size();
        dense[i] = {a * std::cos(th), b * std::sin(th)};
    }
    return geom::equidistribute(dense, J);
}

// Union of the unit disk and an axis-aligned square of side 2 whose left side
// cuts the circle at +-45 degrees. The boundary keeps a 3/2 pi circular arc;
// the two junctions are nonconvex corners. Approximate reconstruction; no
// exact vertex data is available.
DiscreteCurve make_circle_square_merge(int J) {
    const double a = std::sqrt(0.5);
    std::vector<Vec2> dense;
    const int arc_n = 3000;
    for (int i = 0; i <= arc_n; ++i) {
        const double th = kPi / 4 + (3.0 * kPi / 2) * i / arc_n;
        dense.push_back({std::cos(th), std::sin(th)});
    }
    dense.push_back({a, -1.0});
    dense.push_back({a + 2.0, -1.0});
    dense.push_back({a + 2.0, 1.0});
    dense.push_back({a, 1.0});
    return geom::equidistribute(dense, J);
}

// Nonconvex L-shaped polygon with 45-degree chamfers, so that every edge
// normal belongs to the regular octagon. Approximate reconstruction of the
// classic crystalline test shape; no exact vertex data is available.
DiscreteCurve make_chamfered_l_polygon(int J) {
    const std::vector<Vec2> base = {
        {2, 0},  {14, 0}, {16, 2}, {16, 4}, {14, 6}, {8, 6},
        {6, 8},  {6, 14}, {4, 16}, {2, 16}, {0, 14}, {0, 2},
    };
    std::vector<Vec2> shifted;
    for (const Vec2& p : base) shifted.push_back(p - Vec2{8.0, 8.0});
    return geom::equidistribute(shifted, J);
}

std::map<std::string, Preset> build_presets() {
    std::map<std::string, Preset> out;
    auto add = [&](Preset p) { out[p.name] = std::move(p); };

    {
        Preset p;
        p.name = "fig1_ellipse";
        p.flow.scheme = schemes::Scheme::FdAni;
        p.flow.model = AnisotropyModel::elliptic(0.5);
        p.T = 0.499;
        p.initial = [](int J) { return make_ellipse_equidistributed(J, 1.0, 0.5); };
        p.snapshot_times = arange(0.0, 0.45, 0.05);
        p.snapshot_times.push_back(0.499);
        add(std::move(p));
    }
    for (const auto& [name, k, delta] :
         {std::tuple<const char*, int, double>{"fig4_kfold3", 3, 0.124},
          std::tuple<const char*, int, double>{"fig4_kfold6", 6, 0.028}}) {
        Preset p;
        p.name = name;
        p.flow.scheme = schemes::Scheme::FdAni;
        p.flow.model = AnisotropyModel::smooth_kfold(k, delta);
        p.T = 0.5;
        p.initial = [](int J) { return geom::make_circle(J); };
        p.snapshot_times = arange(0.0, 0.5, 0.05);
        add(std::move(p));
    }
    {
        Preset p;
        p.name = "fig5_square";
        p.flow.scheme = schemes::Scheme::FdBgn;
        p.flow.model = AnisotropyModel::bgn_regular(2, 1e-2);
        p.T = 0.35;
        p.initial = [](int J) { return geom::make_circle(J); };
        p.snapshot_times = arange(0.0, 0.35, 0.05);
        add(std::move(p));
    }
    {
        Preset p;
        p.name = "fig6_oott";
        p.flow.scheme = schemes::Scheme::FdBgn;
        p.flow.model = AnisotropyModel::bgn_regular(2, 1e-2);
        p.J = 256;
        p.T = 0.75;
        p.initial = make_circle_square_merge;
        p.snapshot_times = arange(0.0, 0.7, 0.1);
        p.snapshot_times.push_back(0.75);
        add(std::move(p));
    }
    {
        Preset p;
        p.name = "fig7_almgren_taylor";
        p.flow.scheme = schemes::Scheme::FdBgn;
        p.flow.model = AnisotropyModel::bgn_regular(4, 1e-4);
        p.J = 512;
        p.T = 3.4;
        p.initial = make_chamfered_l_polygon;
        p.snapshot_times = arange(0.0, 3.2, 0.4);
        p.snapshot_times.push_back(3.4);
        add(std::move(p));
    }
    {
        Preset p;
        p.name = "fig9_hyperbolic";
        p.flow.scheme = schemes::Scheme::FdHypbol;
        p.flow.field = metric::make_hyperbolic();
        p.T = 0.14;
        p.initial = [](int J) { return geom::make_circle(J, {2.0, 0.0}, 1.0); };
        p.snapshot_times = arange(0.0, 0.14, 0.02);
        p.hyperbolic_deviation = true;
        add(std::move(p));
    }
    {
        Preset p;
        p.name = "fig10_cone_homotopic";
        p.flow.scheme = schemes::Scheme::FdRiem;
        p.flow.field = metric::make_cone(std::sqrt(3.0));
        p.T = 1.8;
        p.initial = [](int J) { return geom::make_circle(J, {3.4, 0.0}, 1.4); };
        p.snapshot_times = {0.0, 1.0, 1.8};
        p.embed3d = true;
        p.report_kappa_g = true;
        add(std::move(p));
    }
    {
        Preset p;
        p.name = "fig10_cone_winding";
        p.flow.scheme = schemes::Scheme::FdRiem;
        p.flow.field = metric::make_cone(std::sqrt(3.0));
        p.T = 1.0;
        p.initial = [](int J) { return geom::make_circle(J, {0.3, 0.0}, 1.0); };
        p.snapshot_times = {0.0, 0.2, 0.6, 1.0};
        p.embed3d = true;
        add(std::move(p));
    }
    for (const auto& [name, l1, l2, T] :
         {std::tuple<const char*, double, double, double>{"fig11_mountains_small", 1, 1, 2.2},
          std::tuple<const char*, double, double, double>{"fig11_mountains_uneven", 5, 1, 4.0},
          std::tuple<const char*, double, double, double>{"fig12_mountains_stuck", 5, 5, 4.0}}) {
        Preset p;
        p.name = name;
        p.flow.scheme = schemes::Scheme::FdRiem;
        p.flow.field = metric::make_two_mountains(l1, l2);
        p.T = T;
        p.initial = [](int J) { return geom::make_circle(J, {0.0, 0.0}, 2.0); };
        p.snapshot_times = {0.0, 1.0, 2.0, 4.0};
        p.embed3d = true;
        p.report_kappa_g = true;
        add(std::move(p));
    }
    return out;
}

const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> table = build_presets();
    return table;
}

ShowcaseResult run_preset(const Preset& preset, const std::string& out_dir,
                          const ShowcaseOptions& options) {
    Preset p = preset;
    if (options.override_J > 0) p.J = options.override_J;
    if (options.override_dt > 0.0) p.flow.dt = options.override_dt;
    if (options.override_T > 0.0) p.T = options.override_T;
    p.flow.set_horizon(p.T);

    const bool write = options.write_files && !out_dir.empty();
    if (write) io::ensure_directory(out_dir);

    RunRecorder rec{energy_model(p.flow)};
    rec.stride = options.series_stride;
    rec.final_step = p.flow.steps;
    if (write) {
        rec.out_dir = out_dir;
        for (double t : p.snapshot_times)
            rec.snapshot_steps.insert(static_cast<int>(std::lround(t / p.flow.dt)));
        if (p.embed3d && p.flow.field && p.flow.field->has_embedding())
            rec.embed_field = p.flow.field.get();
    }

    const DiscreteCurve initial = p.initial(p.J);
    schemes::FlowResult flow = schemes::run_flow(
        initial, p.flow, {[&](int s, const DiscreteCurve& c, const schemes::StepReport* r) {
            rec.observe(s, c, r);
        }});

    rec.write_overlay();

    ShowcaseResult res;
    res.name = p.name;
    res.status = flow.status;
    res.steps_taken = flow.steps_taken;
    res.energy_monotone = rec.monotone;
    res.max_ratio = rec.max_ratio;
    res.series = std::move(rec.rows);
    res.final_positions = flow.curve.positions;
    res.final_time = flow.curve.time;
    res.files = std::move(rec.files);

    if (p.hyperbolic_deviation) {
        const ExactSolution exact = ExactSolution::hyperbolic_circle(2.0, 1.0);
        const double r = exact.radius(res.final_time);
        const Vec2 center{exact.hyperbolic_center(res.final_time), 0.0};
        double dev = 0.0;
        for (const Vec2& x : res.final_positions)
            dev = std::max(dev, std::abs((x - center).norm() - r));
        res.terminal_deviation = dev;
    }
    if (p.report_kappa_g && p.flow.field && flow.status == schemes::FlowStatus::Completed) {
        try {
            const auto kg = metric::geodesic_curvature(*p.flow.field, flow.curve);
            double m = 0.0;
            for (double v : kg) m = std::max(m, std::abs(v));
            res.final_max_geodesic_curvature = m;
        } catch (const Error&) {
            // near-degenerate terminal curve; leave the diagnostic unset
        }
    }

    if (write) {
        const std::string sp = out_dir + "/series.csv";
        io::write_series_csv(sp, res.series);
        res.files.push_back(sp);

        json rep;
        rep["config"] = {{"preset", p.name},
                         {"scheme", scheme_name(p.flow.scheme)},
                         {"J", p.J},
                         {"dt", p.flow.dt},
                         {"T", p.T}};
        if (p.flow.model) rep["config"]["model"] = p.flow.model->description();
        if (p.flow.field) rep["config"]["metric"] = p.flow.field->name();
        json series = json::array();
        for (const auto& r : res.series) {
            json row = {{"step", r.step}, {"t", r.t}, {"energy", r.energy},
                        {"ratio", r.ratio}, {"newton_iters", r.newton_iters}};
            if (r.l2) row["l2_err"] = *r.l2;
            if (r.h1) row["h1_err"] = *r.h1;
            series.push_back(row);
        }
        rep["series"] = series;
        rep["errors"] = nullptr;
        rep["eoc"] = nullptr;
        rep["status"] =
            res.status == schemes::FlowStatus::Completed ? "completed" : "extinct";
        rep["energy_monotone"] = res.energy_monotone;
        if (res.terminal_deviation) rep["terminal_deviation"] = *res.terminal_deviation;
        if (res.final_max_geodesic_curvature)
            rep["final_max_kappa_g"] = *res.final_max_geodesic_curvature;
        const std::string jp = out_dir + "/report.json";
        std::ofstream(jp) << rep.dump(2) << '\n';
        res.files.push_back(jp);
    }
    return res;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, p] : presets()) names.push_back(name);
    return names;
}

ShowcaseResult run_showcase(const std::string& preset, const std::string& out_dir,
                            const ShowcaseOptions& options) {
    const auto it = presets().find(preset);
    if (it == presets().end()) throw ConfigError("unknown preset '" + preset + "'");
    return run_preset(it->second, out_dir, options);
}

// ---------------------------------------------------------------------------
// JSON config runs.
// ---------------------------------------------------------------------------

namespace {

AnisotropyModel model_from_json(const json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "isotropic") return AnisotropyModel::isotropic();
    if (variant == "kfold")
        return AnisotropyModel::smooth_kfold(j.at("k").get<int>(), j.at("delta").get<double>());
    if (variant == "elliptic") return AnisotropyModel::elliptic(j.at("delta").get<double>());
    if (variant == "bgn_regular")
        return AnisotropyModel::bgn_regular(j.at("L").get<int>(), j.at("delta").get<double>());
    if (variant == "bgn") {
        std::vector<Mat2> lambdas;
        for (const auto& m : j.at("matrices")) {
            if (m.size() != 3) throw ConfigError("bgn matrix entries are [a11,a12,a22]");
            lambdas.push_back(
                {m[0].get<double>(), m[1].get<double>(), m[1].get<double>(), m[2].get<double>()});
        }
        return AnisotropyModel::bgn(std::move(lambdas));
    }
    throw ConfigError("unknown model variant '" + variant + "'");
}

std::shared_ptr<const metric::MetricField> metric_from_json(const json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "flat") return metric::make_flat();
    if (variant == "hyperbolic") return metric::make_hyperbolic();
    if (variant == "cone") return metric::make_cone(j.at("b").get<double>());
    if (variant == "two_mountains")
        return metric::make_two_mountains(j.at("lambda1").get<double>(),
                                          j.at("lambda2").get<double>());
    throw ConfigError("unknown metric variant '" + variant + "'");
}

std::function<DiscreteCurve(int)> initial_from_json(const json& j) {
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "circle") {
        Vec2 center{};
        if (j.contains("center"))
            center = {j["center"][0].get<double>(), j["center"][1].get<double>()};
        const double radius = j.value("radius", 1.0);
        return [=](int J) { return geom::make_circle(J, center, radius); };
    }
    if (shape == "ellipse") {
        const double a = j.at("semi_axes")[0].get<double>();
        const double b = j.at("semi_axes")[1].get<double>();
        return [=](int J) { return make_ellipse_equidistributed(J, a, b); };
    }
    if (shape == "wulff_ellipse") {
        const double delta = j.at("delta").get<double>();
        return [=](int J) { return ExactSolution::wulff_ellipse(delta).interpolate(J, 0.0); };
    }
    throw ConfigError("unknown initial shape '" + shape + "'");
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json j;
    in >> j;
    return j;
}

}  // namespace

ShowcaseResult run_config_file(const std::string& config_path, const std::string& out_dir) {
    const json j = load_json(config_path);

    ShowcaseOptions options;
    if (j.contains("observers")) {
        options.series_stride = j["observers"].value("stride", 10);
    }

    if (j.contains("preset")) {
        const std::string name = j["preset"].get<std::string>();
        const auto it = presets().find(name);
        if (it == presets().end()) throw ConfigError("unknown preset '" + name + "'");
        Preset p = it->second;
        if (j.contains("J")) p.J = j["J"].get<int>();
        if (j.contains("dt")) p.flow.dt = j["dt"].get<double>();
        if (j.contains("T")) p.T = j["T"].get<double>();
        if (j.contains("observers") && j["observers"].contains("snapshot_times"))
            p.snapshot_times = j["observers"]["snapshot_times"].get<std::vector<double>>();
        return run_preset(p, out_dir, options);
    }

    Preset p;
    p.name = j.value("name", std::string("custom"));
    const std::string scheme = j.at("scheme").get<std::string>();
    if (scheme == "fdani")
        p.flow.scheme = schemes::Scheme::FdAni;
    else if (scheme == "fdbgn")
        p.flow.scheme = schemes::Scheme::FdBgn;
    else if (scheme == "fdriem")
        p.flow.scheme = schemes::Scheme::FdRiem;
    else if (scheme == "fdhypbol")
        p.flow.scheme = schemes::Scheme::FdHypbol;
    else
        throw ConfigError("unknown scheme '" + scheme + "'");

    if (j.contains("model")) p.flow.model = model_from_json(j["model"]);
    if (j.contains("metric")) {
        p.flow.field = metric_from_json(j["metric"]);
        p.flow.riem.split_c = j["metric"].value("split_c", 0.0);
        p.flow.hypbol.split_c = p.flow.riem.split_c;
        if (p.flow.hypbol.split_c > 0.0)
            p.flow.hypbol.gradient = schemes::GradientTreatment::Split;
        const std::string grad = j["metric"].value("gradient", std::string("implicit"));
        if (grad == "explicit") p.flow.hypbol.gradient = schemes::GradientTreatment::Explicit;
    }
    p.J = j.at("J").get<int>();
    p.flow.dt = j.at("dt").get<double>();
    p.T = j.at("T").get<double>();
    if (j.contains("forcing")) {
        if (!p.flow.model) throw ConfigError("forcing needs a space-independent model");
        const double delta = j["forcing"].at("delta").get<double>();
        p.flow.forcing = schemes::manufactured_forcing(*p.flow.model,
                                                       ExactSolution::wulff_ellipse(delta));
    }
    p.initial = initial_from_json(j.at("initial"));
    if (j.contains("observers") && j["observers"].contains("snapshot_times"))
        p.snapshot_times = j["observers"]["snapshot_times"].get<std::vector<double>>();
    p.embed3d = p.flow.field && p.flow.field->has_embedding();
    p.report_kappa_g = p.flow.field != nullptr;
    return run_preset(p, out_dir, options);
}

std::vector<std::string> write_wulff_files(const std::string& model_path, int samples,
                                           const std::string& out_dir) {
    const json j = load_json(model_path);
    const AnisotropyModel model = model_from_json(j);
    io::ensure_directory(out_dir);
    const std::vector<Vec2> wulff = aniso::sample_wulff(model, samples);
    const std::vector<Vec2> frank = aniso::sample_frank(model, samples);
    std::vector<std::string> files;
    io::write_points_csv(out_dir + "/wulff.csv", wulff);
    files.push_back(out_dir + "/wulff.csv");
    io::write_points_csv(out_dir + "/frank.csv", frank);
    files.push_back(out_dir + "/frank.csv");
    io::write_svg(out_dir + "/wulff.svg", {wulff});
    files.push_back(out_dir + "/wulff.svg");
    io::write_svg(out_dir + "/frank.svg", {frank});
    files.push_back(out_dir + "/frank.svg");
    return files;
}

}  // namespace acsf::harness
