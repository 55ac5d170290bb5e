#include "acsf/schemes.hpp"

#include <cmath>
#include <memory>
#include <utility>

#include "acsf/errors.hpp"
#include "acsf/exact.hpp"

namespace acsf::schemes {

using geom::DiscreteCurve;
using solver::CyclicBlockTridiagonal;

namespace {

// Element derivatives of nodal data; throws on a collapsed element.
std::vector<Vec2> derivatives_checked(const std::vector<Vec2>& pos, int J, const char* where) {
    std::vector<Vec2> d(J);
    for (int j = 0; j < J; ++j) {
        const int jm = j == 0 ? J - 1 : j - 1;
        d[j] = (pos[j] - pos[jm]) * static_cast<double>(J);
        if (d[j].x == 0.0 && d[j].y == 0.0)
            throw DegenerateMeshError(std::string(where) + ": zero-length element " +
                                      std::to_string(j));
    }
    return d;
}

// Matrix with rows r0^T, r1^T.
Mat2 from_rows(const Vec2& r0, const Vec2& r1) { return {r0.x, r0.y, r1.x, r1.y}; }

// Lumped (Phi(x, x_rho), 1)^h for metric-induced densities, Phi = 1/2 G(z) p.p.
double phi_energy_metric(const metric::MetricField& field, const DiscreteCurve& c) {
    const int J = c.size();
    double s = 0.0;
    for (int j = 0; j < J; ++j) {
        const int jm = c.mesh.prev(j);
        const Vec2 p = c.chord(j) * static_cast<double>(J);
        s += 0.5 * field.metric(c.positions[j]).quad(p, p) +
             0.5 * field.metric(c.positions[jm]).quad(p, p);
    }
    return 0.5 * c.mesh.h() * s;
}

AssembledStep build_fdani(const DiscreteCurve& base, const aniso::AnisotropyModel& model,
                          double dt, const Forcing* forcing) {
    const int J = base.size();
    const double h = base.mesh.h();
    const std::vector<Vec2> pm = derivatives_checked(base.positions, J, "step_fdani");

    auto mass = std::make_shared<std::vector<Mat2>>(J);
    {
        std::vector<Mat2> H(J);
        for (int j = 0; j < J; ++j) H[j] = aniso::h_matrix(model, {}, pm[j]);
        for (int j = 0; j < J; ++j)
            (*mass)[j] = (H[j] + H[base.mesh.next(j)]) * (0.5 * h / dt);
    }
    auto load = std::make_shared<std::vector<Vec2>>(J);
    if (forcing)
        for (int j = 0; j < J; ++j)
            (*load)[j] = (*forcing)(base.mesh.node(j), base.time + dt) * h;
    auto old_pos = std::make_shared<std::vector<Vec2>>(base.positions);

    AssembledStep sys;
    sys.residual = [=](const std::vector<Vec2>& X) {
        const std::vector<Vec2> P = derivatives_checked(X, J, "step_fdani");
        std::vector<Vec2> grad(J);
        for (int j = 0; j < J; ++j) grad[j] = aniso::phi_jet(model, {}, P[j]).grad_p;
        std::vector<Vec2> R(J);
        for (int j = 0; j < J; ++j) {
            const int jp = j + 1 == J ? 0 : j + 1;
            R[j] = (*mass)[j] * (X[j] - (*old_pos)[j]) + grad[j] - grad[jp] - (*load)[j];
        }
        return R;
    };
    sys.jacobian = [=](const std::vector<Vec2>& X) {
        const std::vector<Vec2> P = derivatives_checked(X, J, "step_fdani");
        std::vector<Mat2> hess(J);
        for (int j = 0; j < J; ++j) hess[j] = aniso::phi_jet(model, {}, P[j]).hess_p;
        CyclicBlockTridiagonal A(J);
        for (int j = 0; j < J; ++j) {
            const int jp = j + 1 == J ? 0 : j + 1;
            A.lower[j] = hess[j] * (-1.0 / h);
            A.upper[j] = hess[jp] * (-1.0 / h);
            A.diag[j] = (*mass)[j] + (hess[j] + hess[jp]) * (1.0 / h);
        }
        return A;
    };
    return sys;
}

AssembledStep build_fdbgn(const DiscreteCurve& base, const aniso::AnisotropyModel& model,
                          double dt) {
    const int J = base.size();
    const double h = base.mesh.h();
    const std::vector<Vec2> pm = derivatives_checked(base.positions, J, "step_fdbgn");

    auto A = std::make_shared<CyclicBlockTridiagonal>(J);
    auto rhs = std::make_shared<std::vector<Vec2>>(J);
    {
        std::vector<Mat2> H(J), B(J);
        for (int j = 0; j < J; ++j) {
            H[j] = aniso::h_matrix(model, {}, pm[j]);
            B[j] = aniso::b_matrix(model, pm[j]);
        }
        for (int j = 0; j < J; ++j) {
            const int jp = base.mesh.next(j);
            const Mat2 mass = (H[j] + H[jp]) * (0.5 * h / dt);
            A->lower[j] = B[j] * (-1.0 / h);
            A->upper[j] = B[jp] * (-1.0 / h);
            A->diag[j] = mass + (B[j] + B[jp]) * (1.0 / h);
            (*rhs)[j] = mass * base.positions[j];
        }
    }
    AssembledStep sys;
    sys.residual = [=](const std::vector<Vec2>& X) {
        std::vector<Vec2> R = A->apply(X);
        for (int j = 0; j < A->n; ++j) R[j] -= (*rhs)[j];
        return R;
    };
    sys.jacobian = [=](const std::vector<Vec2>&) { return *A; };
    return sys;
}

AssembledStep build_fdriem(const DiscreteCurve& base, const metric::MetricField& field,
                           double dt, const RiemOptions& options) {
    const int J = base.size();
    const double h = base.mesh.h();
    const metric::ConvexSplitting split(field, options.split_c);
    const std::vector<Vec2> pm = derivatives_checked(base.positions, J, "step_fdriem");

    auto mass = std::make_shared<std::vector<Mat2>>(J);
    auto Gbar = std::make_shared<std::vector<Mat2>>(J);
    auto minus_grad = std::make_shared<std::vector<std::array<Mat2, 2>>>(J);
    auto old_pos = std::make_shared<std::vector<Vec2>>(base.positions);
    {
        std::vector<Mat2> Gnode(J);
        for (int j = 0; j < J; ++j) Gnode[j] = field.metric(base.positions[j]);
        for (int j = 0; j < J; ++j) {
            const int jm = base.mesh.prev(j);
            const int jp = base.mesh.next(j);
            const Mat2 Hm = aniso::h_matrix_riemannian(field, base.positions[j], pm[j]);
            const Mat2 Hp = aniso::h_matrix_riemannian(field, base.positions[j], pm[jp]);
            (*mass)[j] = (Hm + Hp) * (0.5 * h / dt);
            if (options.stiffness == StiffnessQuadrature::Lumped) {
                (*Gbar)[j] = (Gnode[j] + Gnode[jm]) * 0.5;
            } else {
                const Vec2 mid = (base.positions[j] + base.positions[jm]) * 0.5;
                (*Gbar)[j] = (Gnode[j] + field.metric(mid) * 4.0 + Gnode[jm]) * (1.0 / 6.0);
            }
            (*minus_grad)[j] = split.minus_grad(base.positions[j]);
        }
    }

    const metric::MetricField* fp = &field;
    auto check_domain = [fp, J](const std::vector<Vec2>& X) {
        for (int j = 0; j < J; ++j)
            if (!fp->admissible(X[j]))
                throw DomainError("step_fdriem: trial node " + std::to_string(j) +
                                  " outside the domain of '" + fp->name() + "'");
    };
    auto gradient_vectors = [split, minus_grad](const std::vector<Vec2>& X, int j,
                                                std::array<Mat2, 2>& M) {
        const auto plus = split.plus_grad(X[j]);
        M[0] = plus[0] + (*minus_grad)[j][0];
        M[1] = plus[1] + (*minus_grad)[j][1];
    };

    AssembledStep sys;
    sys.residual = [=](const std::vector<Vec2>& X) {
        check_domain(X);
        const std::vector<Vec2> P = derivatives_checked(X, J, "step_fdriem");
        std::vector<Vec2> R(J);
        for (int j = 0; j < J; ++j) {
            const int jp = j + 1 == J ? 0 : j + 1;
            std::array<Mat2, 2> M;
            gradient_vectors(X, j, M);
            const double q = M[0].quad(P[j], P[j]) + M[0].quad(P[jp], P[jp]);
            const double r = M[1].quad(P[j], P[j]) + M[1].quad(P[jp], P[jp]);
            R[j] = (*mass)[j] * (X[j] - (*old_pos)[j]) + (*Gbar)[j] * P[j] -
                   (*Gbar)[jp] * P[jp] + Vec2{q, r} * (0.25 * h);
        }
        return R;
    };
    sys.jacobian = [=](const std::vector<Vec2>& X) {
        check_domain(X);
        const std::vector<Vec2> P = derivatives_checked(X, J, "step_fdriem");
        CyclicBlockTridiagonal A(J);
        for (int j = 0; j < J; ++j) {
            const int jp = j + 1 == J ? 0 : j + 1;
            std::array<Mat2, 2> M;
            gradient_vectors(X, j, M);
            const Vec2 row1_l = M[0] * P[j];
            const Vec2 row2_l = M[1] * P[j];
            const Vec2 row1_u = M[0] * P[jp];
            const Vec2 row2_u = M[1] * P[jp];
            A.lower[j] = (*Gbar)[j] * (-1.0 / h) - from_rows(row1_l, row2_l) * 0.5;
            A.upper[j] = (*Gbar)[jp] * (-1.0 / h) + from_rows(row1_u, row2_u) * 0.5;

            // z-derivatives of the gradient vectors need the second
            // derivatives of G_plus
            const auto GH = split.plus_hess(X[j]);  // d11, d12, d22
            const double q1 = GH[0].quad(P[j], P[j]) + GH[0].quad(P[jp], P[jp]);
            const double q2 = GH[1].quad(P[j], P[j]) + GH[1].quad(P[jp], P[jp]);
            const double q3 = GH[2].quad(P[j], P[j]) + GH[2].quad(P[jp], P[jp]);
            A.diag[j] = (*mass)[j] + ((*Gbar)[j] + (*Gbar)[jp]) * (1.0 / h) +
                        Mat2{q1, q2, q2, q3} * (0.25 * h) +
                        from_rows(row1_l - row1_u, row2_l - row2_u) * 0.5;
        }
        return A;
    };
    return sys;
}

AssembledStep build_fdhypbol(const DiscreteCurve& base, const metric::MetricField& field,
                             double dt, const HypbolOptions& options) {
    const int J = base.size();
    const double h = base.mesh.h();
    const double c = options.gradient == GradientTreatment::Split ? options.split_c : 0.0;
    const bool explicit_gradient = options.gradient == GradientTreatment::Explicit;
    const std::vector<Vec2> pm = derivatives_checked(base.positions, J, "step_fdhypbol");

    auto massw = std::make_shared<std::vector<double>>(J);
    auto gbar = std::make_shared<std::vector<double>>(J);
    auto frozen_grad = std::make_shared<std::vector<Vec2>>(J);
    auto old_pos = std::make_shared<std::vector<Vec2>>(base.positions);
    for (int j = 0; j < J; ++j) {
        const int jm = base.mesh.prev(j);
        const int jp = base.mesh.next(j);
        const double ga = field.conformal_factor(base.positions[j]);
        const double gb = field.conformal_factor(base.positions[jm]);
        const double w = pm[j].norm2() + pm[jp].norm2();
        (*massw)[j] = 0.5 * h / dt * ga * ga * w;
        if (options.stiffness == StiffnessQuadrature::Lumped) {
            (*gbar)[j] = 0.5 * (ga + gb);
        } else {
            const Vec2 mid = (base.positions[j] + base.positions[jm]) * 0.5;
            (*gbar)[j] = (ga + 4.0 * field.conformal_factor(mid) + gb) / 6.0;
        }
        (*frozen_grad)[j] = explicit_gradient
                                ? field.conformal_grad(base.positions[j]) * (0.25 * h * w)
                                : base.positions[j] * (-2.0 * c);  // grad g_minus
    }

    const metric::MetricField* fp = &field;
    auto check_domain = [fp, J](const std::vector<Vec2>& X) {
        for (int j = 0; j < J; ++j)
            if (!fp->admissible(X[j]))
                throw DomainError("step_fdhypbol: trial node " + std::to_string(j) +
                                  " outside the domain of '" + fp->name() + "'");
    };
    auto gplus_grad = [fp, c](const Vec2& z) {
        return fp->conformal_grad(z) + z * (2.0 * c);
    };

    AssembledStep sys;
    sys.residual = [=](const std::vector<Vec2>& X) {
        check_domain(X);
        const std::vector<Vec2> P = derivatives_checked(X, J, "step_fdhypbol");
        std::vector<Vec2> R(J);
        for (int j = 0; j < J; ++j) {
            const int jp = j + 1 == J ? 0 : j + 1;
            R[j] = (X[j] - (*old_pos)[j]) * (*massw)[j] + P[j] * (*gbar)[j] -
                   P[jp] * (*gbar)[jp];
            if (explicit_gradient) {
                R[j] += (*frozen_grad)[j];
            } else {
                const Vec2 m = gplus_grad(X[j]) + (*frozen_grad)[j];
                R[j] += m * (0.25 * h * (P[j].norm2() + P[jp].norm2()));
            }
        }
        return R;
    };
    sys.jacobian = [=](const std::vector<Vec2>& X) {
        check_domain(X);
        const std::vector<Vec2> P = derivatives_checked(X, J, "step_fdhypbol");
        CyclicBlockTridiagonal A(J);
        for (int j = 0; j < J; ++j) {
            const int jp = j + 1 == J ? 0 : j + 1;
            A.lower[j] = Mat2::identity() * (-(*gbar)[j] / h);
            A.upper[j] = Mat2::identity() * (-(*gbar)[jp] / h);
            A.diag[j] = Mat2::identity() * ((*massw)[j] + ((*gbar)[j] + (*gbar)[jp]) / h);
            if (!explicit_gradient) {
                const Vec2 m = gplus_grad(X[j]) + (*frozen_grad)[j];
                const double w = P[j].norm2() + P[jp].norm2();
                const Mat2 gh = fp->conformal_hess(X[j]) + Mat2::identity() * (2.0 * c);
                A.lower[j] -= Mat2::outer(m, P[j]) * 0.5;
                A.upper[j] += Mat2::outer(m, P[jp]) * 0.5;
                A.diag[j] += gh * (0.25 * h * w) + Mat2::outer(m, P[j] - P[jp]) * 0.5;
            }
        }
        return A;
    };
    return sys;
}

// Residual/Jacobian of one backward Euler step with coefficients frozen at
// `base`; the step size only scales the mass term.
using SystemBuilder = std::function<AssembledStep(const DiscreteCurve& base, double dt)>;

// Damped Newton on the full step; when it stalls, two half steps provide the
// initial guess and the full system is solved again from there. The returned
// iterate always solves the original dt-system. The first straight attempt
// gets a modest iteration budget: a healthy backward Euler solve converges in
// a handful of steps, and letting Newton wander for longer can land it on a
// spurious root of a strongly nonlinear large-step system.
solver::NewtonResult solve_implicit(const SystemBuilder& build, const DiscreteCurve& base,
                                    double dt, const solver::NewtonSettings& settings,
                                    int depth = 6) {
    AssembledStep sys = build(base, dt);
    try {
        solver::NewtonSettings first = settings;
        first.max_iterations = std::min(settings.max_iterations, 12);
        return solver::newton_solve(sys.residual, sys.jacobian, base.positions, first);
    } catch (const NonconvergenceError&) {
        if (depth <= 0) throw;
    }
    const DiscreteCurve mid(base.mesh,
                            solve_implicit(build, base, 0.5 * dt, settings, depth - 1).x,
                            base.time + 0.5 * dt);
    std::vector<Vec2> guess = solve_implicit(build, mid, 0.5 * dt, settings, depth - 1).x;
    return solver::newton_solve(sys.residual, sys.jacobian, std::move(guess), settings);
}

}  // namespace

double phi_lumped_energy(const aniso::AnisotropyModel& model, const DiscreteCurve& curve) {
    const int J = curve.size();
    const double h = curve.mesh.h();
    double s = 0.0;
    for (int j = 0; j < J; ++j) {
        const int jm = curve.mesh.prev(j);
        const Vec2 p = curve.chord(j) * static_cast<double>(J);
        s += aniso::phi_value(model, curve.positions[j], p) +
             aniso::phi_value(model, curve.positions[jm], p);
    }
    return 0.5 * h * s;
}

StepReport step_fdani(const DiscreteCurve& curve, const aniso::AnisotropyModel& model,
                      double dt, const Forcing* forcing,
                      const solver::NewtonSettings& settings) {
    if (!model.space_independent())
        throw ConfigError("step_fdani: needs a space-independent model");
    auto build = [&](const DiscreteCurve& base, double step_dt) {
        return build_fdani(base, model, step_dt, forcing);
    };
    solver::NewtonResult nr = solve_implicit(build, curve, dt, settings);
    StepReport rep{DiscreteCurve(curve.mesh, std::move(nr.x), curve.time + dt),
                   phi_lumped_energy(model, curve), 0.0, nr.iterations, nr.residual_norm};
    rep.phi_energy_after = phi_lumped_energy(model, rep.curve);
    return rep;
}

StepReport step_fdbgn(const DiscreteCurve& curve, const aniso::AnisotropyModel& model,
                      double dt) {
    if (model.kind() != aniso::DensityKind::Bgn)
        throw ConfigError("step_fdbgn: needs a Bgn model");
    AssembledStep sys = build_fdbgn(curve, model, dt);
    const CyclicBlockTridiagonal A = sys.jacobian(curve.positions);
    std::vector<Vec2> rhs = sys.residual(std::vector<Vec2>(curve.size(), Vec2{}));
    for (auto& r : rhs) r = -r;  // residual(0) = -b
    std::vector<Vec2> x = solver::cyclic_solve(A, rhs);
    const double rnorm = solver::max_norm(sys.residual(x));

    StepReport rep{DiscreteCurve(curve.mesh, std::move(x), curve.time + dt),
                   phi_lumped_energy(model, curve), 0.0, 0, rnorm};
    rep.phi_energy_after = phi_lumped_energy(model, rep.curve);
    return rep;
}

StepReport step_fdriem(const DiscreteCurve& curve, const metric::MetricField& field,
                       double dt, const solver::NewtonSettings& settings,
                       const RiemOptions& options) {
    const int J = curve.size();
    for (int j = 0; j < J; ++j)
        if (!field.admissible(curve.positions[j]))
            throw DomainError("step_fdriem: node " + std::to_string(j) +
                              " outside the domain of '" + field.name() + "'");
    auto build = [&](const DiscreteCurve& base, double step_dt) {
        return build_fdriem(base, field, step_dt, options);
    };
    solver::NewtonResult nr = solve_implicit(build, curve, dt, settings);
    StepReport rep{DiscreteCurve(curve.mesh, std::move(nr.x), curve.time + dt),
                   phi_energy_metric(field, curve), 0.0, nr.iterations, nr.residual_norm};
    rep.phi_energy_after = phi_energy_metric(field, rep.curve);
    return rep;
}

StepReport step_fdhypbol(const DiscreteCurve& curve, const metric::MetricField& field,
                         double dt, const solver::NewtonSettings& settings,
                         const HypbolOptions& options) {
    if (!field.is_conformal())
        throw ConfigError("step_fdhypbol: needs a conformal metric");
    const int J = curve.size();
    for (int j = 0; j < J; ++j)
        if (!field.admissible(curve.positions[j]))
            throw DomainError("step_fdhypbol: node " + std::to_string(j) +
                              " outside the domain of '" + field.name() + "'");
    auto build = [&](const DiscreteCurve& base, double step_dt) {
        return build_fdhypbol(base, field, step_dt, options);
    };
    solver::NewtonResult nr = solve_implicit(build, curve, dt, settings);
    StepReport rep{DiscreteCurve(curve.mesh, std::move(nr.x), curve.time + dt),
                   phi_energy_metric(field, curve), 0.0, nr.iterations, nr.residual_norm};
    rep.phi_energy_after = phi_energy_metric(field, rep.curve);
    return rep;
}

void FlowConfig::set_horizon(double T) {
    if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("set_horizon: need T > 0 and dt > 0");
    const double m = T / dt;
    const double rounded = std::round(m);
    if (std::abs(m - rounded) > 1e-8 * std::max(1.0, m) || rounded < 1.0)
        throw ConfigError("set_horizon: T/dt must be a positive integer");
    steps = static_cast<int>(rounded);
}

StepReport advance(const geom::DiscreteCurve& curve, const FlowConfig& config) {
    switch (config.scheme) {
        case Scheme::FdAni: {
            if (!config.model) throw ConfigError("advance: FdAni needs a model");
            const Forcing* f = config.forcing ? &config.forcing : nullptr;
            return step_fdani(curve, *config.model, config.dt, f, config.newton);
        }
        case Scheme::FdBgn:
            if (!config.model) throw ConfigError("advance: FdBgn needs a model");
            return step_fdbgn(curve, *config.model, config.dt);
        case Scheme::FdRiem:
            if (!config.field) throw ConfigError("advance: FdRiem needs a metric");
            return step_fdriem(curve, *config.field, config.dt, config.newton, config.riem);
        case Scheme::FdHypbol:
            if (!config.field) throw ConfigError("advance: FdHypbol needs a metric");
            return step_fdhypbol(curve, *config.field, config.dt, config.newton, config.hypbol);
    }
    throw ConfigError("advance: unknown scheme");
}

AssembledStep assemble_step(const geom::DiscreteCurve& curve, const FlowConfig& config) {
    switch (config.scheme) {
        case Scheme::FdAni: {
            if (!config.model) throw ConfigError("assemble_step: FdAni needs a model");
            const Forcing* f = config.forcing ? &config.forcing : nullptr;
            return build_fdani(curve, *config.model, config.dt, f);
        }
        case Scheme::FdBgn:
            if (!config.model) throw ConfigError("assemble_step: FdBgn needs a model");
            return build_fdbgn(curve, *config.model, config.dt);
        case Scheme::FdRiem:
            if (!config.field) throw ConfigError("assemble_step: FdRiem needs a metric");
            return build_fdriem(curve, *config.field, config.dt, config.riem);
        case Scheme::FdHypbol:
            if (!config.field) throw ConfigError("assemble_step: FdHypbol needs a metric");
            return build_fdhypbol(curve, *config.field, config.dt, config.hypbol);
    }
    throw ConfigError("assemble_step: unknown scheme");
}

FlowResult run_flow(const geom::DiscreteCurve& initial, const FlowConfig& config,
                    const std::vector<StepCallback>& observers) {
    if (config.steps < 0) throw ConfigError("run_flow: negative step count");
    DiscreteCurve curve = initial;
    for (const auto& obs : observers) obs(0, curve, nullptr);

    for (int m = 0; m < config.steps; ++m) {
        if (geom::min_element_length(curve) < 1e-10) return {curve, FlowStatus::Extinct, m};
        StepReport rep = [&]() {
            try {
                return advance(curve, config);
            } catch (const NonconvergenceError& e) {
                throw NonconvergenceError("step " + std::to_string(m) + ": " + e.what(),
                                          e.last_residual);
            } catch (const DomainError& e) {
                throw DomainError("step " + std::to_string(m) + ": " + e.what());
            } catch (const DegenerateMeshError& e) {
                throw DegenerateMeshError("step " + std::to_string(m) + ": " + e.what());
            }
        }();
        curve = rep.curve;
        for (const auto& obs : observers) obs(m + 1, curve, &rep);
        if (rep.phi_energy_after < 1e-12) return {curve, FlowStatus::Extinct, m + 1};
    }
    return {curve, FlowStatus::Completed, config.steps};
}

Forcing manufactured_forcing(const aniso::AnisotropyModel& model,
                             const harness::ExactSolution& exact) {
    if (!model.space_independent())
        throw ConfigError("manufactured_forcing: needs a space-independent model");
    return [model, exact](double rho, double t) {
        const Vec2 xr = exact.d_rho(rho, t);
        const Vec2 xt = exact.d_t(rho, t);
        const Vec2 xrr = exact.d_rhorho(rho, t);
        const Mat2 H = aniso::h_matrix(model, {}, xr);
        const Mat2 phi_pp = aniso::phi_jet(model, {}, xr).hess_p;
        return H * xt - phi_pp * xrr;
    };
}

}  // namespace acsf::schemes
