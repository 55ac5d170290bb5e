#include <cmath>
#include <random>
#include <sstream>

#include "acsf/anisotropy.hpp"
#include "acsf/errors.hpp"
#include "acsf/harness.hpp"
#include "acsf/metric.hpp"
#include "acsf/schemes.hpp"

namespace acsf::harness {

namespace {

using aniso::AnisotropyModel;
using geom::DiscreteCurve;

struct Tally {
    bool pass = true;
    double worst = 0.0;

    void expect(double err, double tol) {
        worst = std::max(worst, err);
        if (!(err <= tol)) pass = false;
    }
    CheckResult done(const std::string& name) const {
        std::ostringstream os;
        os << "worst deviation " << worst;
        return {name, pass, os.str()};
    }
};

std::vector<std::pair<std::string, AnisotropyModel>> bundled_models() {
    return {
        {"isotropic", AnisotropyModel::isotropic()},
        {"kfold(3,0.124)", AnisotropyModel::smooth_kfold(3, 0.124)},
        {"kfold(6,0.028)", AnisotropyModel::smooth_kfold(6, 0.028)},
        {"elliptic(0.5)", AnisotropyModel::elliptic(0.5)},
        {"bgn_regular(2,1e-2)", AnisotropyModel::bgn_regular(2, 1e-2)},
        {"metric(hyperbolic)", AnisotropyModel::metric_induced(metric::make_hyperbolic())},
        {"metric(cone)", AnisotropyModel::metric_induced(metric::make_cone(std::sqrt(3.0)))},
        {"metric(two_mountains)",
         AnisotropyModel::metric_induced(metric::make_two_mountains(5.0, 1.0))},
    };
}

std::vector<std::shared_ptr<const metric::MetricField>> bundled_fields() {
    return {metric::make_flat(), metric::make_hyperbolic(), metric::make_cone(std::sqrt(3.0)),
            metric::make_two_mountains(5.0, 1.0)};
}

Vec2 sample_z(const AnisotropyModel& model, std::mt19937& rng) {
    if (model.space_independent()) {
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        return {u(rng), u(rng)};
    }
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    const Vec2 base = model.field()->sample_point();
    return base + Vec2{u(rng), u(rng)};
}

Vec2 sample_p(std::mt19937& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> mag(0.3, 3.0);
    const double th = angle(rng);
    return Vec2{std::cos(th), std::sin(th)} * mag(rng);
}

// Central difference of a scalar function of a 2-vector argument.
template <typename F>
Vec2 fd_grad(const F& f, const Vec2& x, double step) {
    return {(f(x + Vec2{step, 0}) - f(x - Vec2{step, 0})) / (2 * step),
            (f(x + Vec2{0, step}) - f(x - Vec2{0, step})) / (2 * step)};
}

CheckResult check_density_derivatives() {
    std::mt19937 rng(7);
    Tally t;
    for (const auto& [name, model] : bundled_models()) {
        for (int trial = 0; trial < 40; ++trial) {
            const Vec2 z = sample_z(model, rng);
            const Vec2 p = sample_p(rng);
            const double hp = 1e-6 * p.norm();
            const aniso::DensityJet jet = model.jet(z, p);
            const double scale = std::max(1.0, std::abs(jet.value));

            const Vec2 gp = fd_grad([&](Vec2 q) { return model.value(z, q); }, p, hp);
            t.expect(max_abs(gp - jet.grad_p) / scale, 1e-6);

            const double hz = 1e-6;
            const Vec2 gz = fd_grad([&](Vec2 w) { return model.value(w, p); }, z, hz);
            t.expect(max_abs(gz - jet.grad_z) / scale, 1e-6);

            // rows of gamma_pp against finite differences of gamma_p
            for (int c = 0; c < 2; ++c) {
                const Vec2 e = c == 0 ? Vec2{hp, 0} : Vec2{0, hp};
                const Vec2 col = (model.jet(z, p + e).grad_p - model.jet(z, p - e).grad_p) /
                                 (2 * hp);
                t.expect(std::abs(col.x - jet.hess_p(0, c)) / scale, 2e-6);
                t.expect(std::abs(col.y - jet.hess_p(1, c)) / scale, 2e-6);
            }
            // columns of gamma_{p z_j} against finite differences in z
            for (int c = 0; c < 2; ++c) {
                const Vec2 e = c == 0 ? Vec2{hz, 0} : Vec2{0, hz};
                const Vec2 col = (model.jet(z + e, p).grad_p - model.jet(z - e, p).grad_p) /
                                 (2 * hz);
                t.expect(std::abs(col.x - jet.mixed_pz(0, c)) / scale, 2e-6);
                t.expect(std::abs(col.y - jet.mixed_pz(1, c)) / scale, 2e-6);
            }
        }
    }
    return t.done("density derivatives match central differences");
}

CheckResult check_homogeneity() {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> lam(0.1, 10.0);
    Tally t;
    for (const auto& [name, model] : bundled_models()) {
        for (int trial = 0; trial < 60; ++trial) {
            const Vec2 z = sample_z(model, rng);
            const Vec2 p = sample_p(rng);
            const double l = lam(rng);
            const double g = model.value(z, p);
            t.expect(std::abs(model.value(z, p * l) - l * g) / (1.0 + l * g), 1e-12);
            const aniso::DensityJet jet = model.jet(z, p);
            const aniso::DensityJet jet_l = model.jet(z, p * l);
            t.expect(max_abs(jet_l.grad_p - jet.grad_p), 1e-10);
            t.expect(std::abs(dot(jet.grad_p, p) - g) / (1.0 + g), 1e-10);
            t.expect(max_abs(jet.hess_p * p), 1e-10 * (1.0 + g));
        }
    }
    return t.done("one-homogeneity identities");
}

CheckResult check_phi_identities() {
    std::mt19937 rng(13);
    Tally t;
    for (const auto& [name, model] : bundled_models()) {
        for (int trial = 0; trial < 60; ++trial) {
            const Vec2 z = sample_z(model, rng);
            const Vec2 p = sample_p(rng);
            const aniso::PhiJet phi = aniso::phi_jet(model, z, p);
            const double scale = 1.0 + std::abs(phi.value);
            t.expect(std::abs(dot(phi.grad_p, p) - 2.0 * phi.value) / scale, 1e-12);
            t.expect(max_abs(phi.hess_p * p - phi.grad_p) / scale, 1e-10);
            // Phi_{p z_j} . p = 2 Phi_{z_j}
            for (int c = 0; c < 2; ++c) {
                const double lhs = phi.mixed_pz(0, c) * p.x + phi.mixed_pz(1, c) * p.y;
                const double rhs = 2.0 * (c == 0 ? phi.grad_z.x : phi.grad_z.y);
                t.expect(std::abs(lhs - rhs) / scale, 1e-10);
            }
        }
    }
    return t.done("2-homogeneity identities of Phi");
}

CheckResult check_h_matrix() {
    std::mt19937 rng(17);
    Tally t;
    for (const auto& [name, model] : bundled_models()) {
        for (int trial = 0; trial < 1250; ++trial) {
            const Vec2 z = sample_z(model, rng);
            const Vec2 p = sample_p(rng);
            const Mat2 H = aniso::h_matrix(model, z, p);
            t.expect(std::abs(H.a11 - H.a22) / (1.0 + H.max_abs()), 1e-14);
            t.expect(std::abs(H.a12 + H.a21) / (1.0 + H.max_abs()), 1e-14);
            // quadratic form identity, both sides computed independently
            const aniso::DensityJet jet = model.jet(z, p.perp());
            const double a = model.weight(z);
            const double expected =
                a * a * jet.value * jet.value / jet.grad_p.norm2();
            const Vec2 w = sample_p(rng);
            t.expect(std::abs(H.quad(w, w) - expected * w.norm2()) /
                         (1.0 + std::abs(expected) * w.norm2()),
                     1e-12);
            if (!model.space_independent()) {
                const Mat2 Hr = aniso::h_matrix_riemannian(*model.field(), z, p);
                t.expect((H - Hr).max_abs() / (1.0 + H.max_abs()), 1e-11);
            }
        }
    }
    return t.done("H matrix structure and quadratic form identity");
}

CheckResult check_b_matrix() {
    std::mt19937 rng(19);
    Tally t;
    for (const auto& model :
         {AnisotropyModel::elliptic(0.5), AnisotropyModel::bgn_regular(2, 1e-2),
          AnisotropyModel::bgn_regular(3, 0.1)}) {
        for (int trial = 0; trial < 200; ++trial) {
            const Vec2 p = sample_p(rng);
            const Vec2 q = sample_p(rng);
            const Mat2 B = aniso::b_matrix(model, p);
            const Vec2 phi_p = aniso::phi_jet(model, {}, p).grad_p;
            t.expect(max_abs(B * p - phi_p) / (1.0 + max_abs(phi_p)), 1e-12);
            // B(q) p . (p - q) >= Phi(p) - Phi(q)
            const double lhs = dot(aniso::b_matrix(model, q) * p, p - q);
            const double rhs =
                aniso::phi_value(model, {}, p) - aniso::phi_value(model, {}, q);
            t.expect(std::max(0.0, rhs - lhs) / (1.0 + std::abs(rhs)), 1e-12);
        }
    }
    return t.done("B matrix gradient and monotonicity inequality");
}

CheckResult check_metric_fields() {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Tally t;
    for (const auto& field : bundled_fields()) {
        for (int trial = 0; trial < 120; ++trial) {
            const Vec2 z = field->sample_point() + Vec2{u(rng), u(rng)};
            if (!field->admissible(z)) continue;
            const Mat2 G = field->metric(z);
            t.expect(std::abs(G.a12 - G.a21), 1e-14 * (1.0 + G.max_abs()));
            const bool spd = G.det() > 0.0 && G.trace() > 0.0;
            t.expect(spd ? 0.0 : 1.0, 0.5);
            // first derivatives against central differences
            const double h = 1e-6;
            const auto Gz = field->metric_grad(z);
            for (int c = 0; c < 2; ++c) {
                const Vec2 e = c == 0 ? Vec2{h, 0} : Vec2{0, h};
                const Mat2 fd = (field->metric(z + e) - field->metric(z - e)) * (0.5 / h);
                t.expect((fd - Gz[c]).max_abs() / (1.0 + G.max_abs()), 1e-6);
            }
            // Christoffel compatibility g_{kl,z_i} = g_{kr} G^r_{il} + g_{lr} G^r_{ik}
            const metric::ChristoffelData cd = metric::christoffel(*field, z);
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) {
                        double rhs = 0.0;
                        for (int r = 0; r < 2; ++r)
                            rhs += G(k, r) * cd(r, i, l) + G(l, r) * cd(r, i, k);
                        t.expect(std::abs(Gz[i](k, l) - rhs) / (1.0 + G.max_abs()), 1e-8);
                    }
        }
    }
    return t.done("metric SPD, derivatives and Christoffel compatibility");
}

CheckResult check_curvature_oracles() {
    Tally t;
    const auto fields = bundled_fields();
    // cross-agreement of the two curvature routes on an off-center ellipse
    for (const auto& field : fields) {
        const AnisotropyModel induced = AnisotropyModel::metric_induced(field);
        const Vec2 c = field->sample_point();
        std::vector<Vec2> dense;
        for (int i = 0; i < 64; ++i) {
            const double th = 2.0 * std::numbers::pi * i / 64;
            dense.push_back(c + Vec2{0.45 * std::cos(th), 0.3 * std::sin(th)});
        }
        const DiscreteCurve curve(geom::PeriodicMesh(64), dense, 0.0);
        const auto kg = metric::geodesic_curvature(*field, curve);
        const auto ka = aniso::anisotropic_curvature(induced, curve);
        for (int j = 0; j < 64; ++j)
            t.expect(std::abs(kg[j] - ka[j]) / (1.0 + std::abs(kg[j])), 1e-10);
    }
    // second order convergence to the closed-form value on the cone
    const auto cone = metric::make_cone(std::sqrt(3.0));
    const double r = 0.8;
    const double exact = 1.0 / (r * 2.0);  // 1/(r sqrt(1+b^2)) with b = sqrt(3)
    double prev_err = 0.0;
    for (int J : {24, 48, 96}) {
        const DiscreteCurve circle = geom::make_circle(J, {0, 0}, r);
        double err = 0.0;
        for (double v : metric::geodesic_curvature(*cone, circle))
            err = std::max(err, std::abs(v - exact));
        if (prev_err > 0.0) {
            const double order = std::log2(prev_err / err);
            t.expect(order >= 1.9 ? 0.0 : 1.9 - order, 1e-9);
        }
        prev_err = err;
    }
    return t.done("geodesic vs anisotropic curvature agreement and order");
}

CheckResult check_stability() {
    Tally t;
    const solver::NewtonSettings settings;
    auto run = [&](schemes::FlowConfig flow, const DiscreteCurve& c0, int steps) {
        flow.steps = steps;
        schemes::run_flow(c0, flow,
                          {[&](int, const DiscreteCurve&, const schemes::StepReport* rep) {
                              if (!rep) return;
                              const double slack =
                                  1e-12 * (1.0 + std::abs(rep->phi_energy_before));
                              t.expect(
                                  std::max(0.0, rep->phi_energy_after -
                                                    rep->phi_energy_before - slack),
                                  0.0);
                          }});
    };
    for (double dt : {1e-2, 1.0}) {
        {
            schemes::FlowConfig f;
            f.scheme = schemes::Scheme::FdAni;
            f.model = AnisotropyModel::smooth_kfold(3, 0.124);
            f.dt = dt;
            run(f, geom::make_circle(16), 10);
        }
        {
            schemes::FlowConfig f;
            f.scheme = schemes::Scheme::FdBgn;
            f.model = AnisotropyModel::bgn_regular(2, 1e-2);
            f.dt = dt;
            run(f, geom::make_circle(16), 10);
        }
        {
            schemes::FlowConfig f;
            f.scheme = schemes::Scheme::FdRiem;
            f.field = metric::make_two_mountains(5.0, 1.0);
            f.dt = dt;
            run(f, geom::make_circle(16, {0, 0}, 2.0), 10);
        }
        {
            schemes::FlowConfig f;
            f.scheme = schemes::Scheme::FdHypbol;
            f.field = metric::make_hyperbolic();
            f.dt = dt;
            run(f, geom::make_circle(16, {2, 0}, 1.0), 10);
        }
    }
    return t.done("unconditional energy decrease at large time steps");
}

CheckResult check_scheme_reductions() {
    Tally t;
    // FdAni and FdBgn coincide for a single-matrix density.
    {
        const AnisotropyModel model = AnisotropyModel::elliptic(0.5);
        DiscreteCurve a = geom::make_circle(32);
        DiscreteCurve b = a;
        for (int m = 0; m < 20; ++m) {
            a = schemes::step_fdani(a, model, 1e-3).curve;
            b = schemes::step_fdbgn(b, model, 1e-3).curve;
        }
        for (int j = 0; j < 32; ++j)
            t.expect((a.positions[j] - b.positions[j]).norm(), 1e-8);
    }
    // All four schemes agree on the isotropic/flat reduction.
    {
        const DiscreteCurve c0 = geom::make_circle(32);
        DiscreteCurve a = c0, b = c0, c = c0, d = c0;
        const auto flat = metric::make_flat();
        for (int m = 0; m < 10; ++m) {
            a = schemes::step_fdani(a, AnisotropyModel::isotropic(), 1e-3).curve;
            b = schemes::step_fdbgn(b, AnisotropyModel::bgn({Mat2::identity()}), 1e-3).curve;
            c = schemes::step_fdriem(c, *flat, 1e-3).curve;
            d = schemes::step_fdhypbol(d, *flat, 1e-3).curve;
        }
        for (int j = 0; j < 32; ++j) {
            t.expect((a.positions[j] - b.positions[j]).norm(), 1e-9);
            t.expect((a.positions[j] - c.positions[j]).norm(), 1e-9);
            t.expect((a.positions[j] - d.positions[j]).norm(), 1e-9);
        }
    }
    return t.done("scheme coincidence and isotropic reduction");
}

CheckResult check_convexity_and_dual() {
    Tally t;
    t.expect(aniso::assert_convex(AnisotropyModel::smooth_kfold(6, 0.028)).convex ? 0.0 : 1.0,
             0.5);
    t.expect(aniso::assert_convex(AnisotropyModel::smooth_kfold(6, 0.2)).convex ? 1.0 : 0.0,
             0.5);
    t.expect(aniso::assert_convex(AnisotropyModel::bgn_regular(3, 1e-2)).convex ? 0.0 : 1.0,
             0.5);
    // isotropic dual is the norm; elliptic dual at (0,1) equals 1/delta
    t.expect(std::abs(aniso::dual_value(AnisotropyModel::isotropic(), {3.0, 4.0}) - 5.0),
             1e-9);
    t.expect(std::abs(aniso::dual_value(AnisotropyModel::elliptic(0.5), {0.0, 1.0}) - 2.0),
             1e-9);
    return t.done("convexity certificates and dual density values");
}

}  // namespace

std::vector<CheckResult> run_checks() {
    return {
        check_density_derivatives(), check_homogeneity(),   check_phi_identities(),
        check_h_matrix(),            check_b_matrix(),      check_metric_fields(),
        check_curvature_oracles(),   check_stability(),     check_scheme_reductions(),
        check_convexity_and_dual(),
    };
}

}  // namespace acsf::harness
