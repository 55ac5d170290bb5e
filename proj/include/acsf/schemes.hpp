#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "acsf/anisotropy.hpp"
#include "acsf/geom.hpp"
#include "acsf/metric.hpp"
#include "acsf/solver.hpp"

namespace acsf::schemes {

enum class Scheme { FdAni, FdBgn, FdRiem, FdHypbol };

/// Additional right hand side f(rho, t), tested against hat functions with
/// the lumped product.
using Forcing = std::function<Vec2(double rho, double t)>;

/// Treatment of the metric gradient term in the conformal scheme.
enum class GradientTreatment {
    Implicit,  // g_plus = g, nonlinear (default)
    Split,     // g_plus = g + c|z|^2 with user shift, nonlinear but provably stable
    Explicit,  // whole gradient term frozen at the old iterate, linear
};

struct StepReport {
    geom::DiscreteCurve curve;      // advanced curve, time stamp bumped by dt
    double phi_energy_before = 0.0; // (Phi(x, x_rho), 1)^h of the old iterate
    double phi_energy_after = 0.0;
    int newton_iterations = 0;
    double linear_residual = 0.0;   // max norm of the final solver residual
};

/// Lumped potential energy (Phi(x, x_rho), 1)^h; this is the quantity the
/// implicit steps decrease unconditionally.
double phi_lumped_energy(const aniso::AnisotropyModel& model, const geom::DiscreteCurve& curve);

/// One backward Euler step for a space-independent anisotropy:
///   mass term lumped with H0 frozen at the old derivative, elliptic term
///   (Phi0'(x^{m+1}_rho), eta_rho) integrated exactly, solved by Newton with
///   the analytic Phi0'' Jacobian. Linear in the isotropic and single-matrix
///   cases.
StepReport step_fdani(const geom::DiscreteCurve& curve, const aniso::AnisotropyModel& model,
                      double dt, const Forcing* forcing = nullptr,
                      const solver::NewtonSettings& settings = {});

/// One linear step for Bgn densities: the elliptic term B(x^m_rho) x^{m+1}_rho
/// freezes the matrix at the old derivative; a single cyclic block solve.
StepReport step_fdbgn(const geom::DiscreteCurve& curve, const aniso::AnisotropyModel& model,
                      double dt);

/// Quadrature of the frozen stiffness term (G(x^m) x^{m+1}_rho, eta_rho).
/// Lumped is the vertex (trapezoidal) rule of the mass-lumped product;
/// ElementSimpson resolves the variation of G along each element and is the
/// rule behind the published convergence tables.
enum class StiffnessQuadrature { Lumped, ElementSimpson };

struct RiemOptions {
    double split_c = 0.0;  // shift of the convex splitting; 0 keeps G_plus = G
    StiffnessQuadrature stiffness = StiffnessQuadrature::ElementSimpson;
};

/// One step of the Riemannian scheme: lumped H(x^m, x^m_rho) mass term,
/// lumped G(x^m) stiffness, and the split gradient term with G_plus at the
/// new iterate; solved by Newton.
StepReport step_fdriem(const geom::DiscreteCurve& curve, const metric::MetricField& field,
                       double dt, const solver::NewtonSettings& settings = {},
                       const RiemOptions& options = {});

struct HypbolOptions {
    GradientTreatment gradient = GradientTreatment::Implicit;
    double split_c = 0.0;  // used by GradientTreatment::Split
    StiffnessQuadrature stiffness = StiffnessQuadrature::ElementSimpson;
};

/// One step of the conformally flat scheme (G = g Id).
StepReport step_fdhypbol(const geom::DiscreteCurve& curve, const metric::MetricField& field,
                         double dt, const solver::NewtonSettings& settings = {},
                         const HypbolOptions& options = {});

struct FlowConfig {
    Scheme scheme = Scheme::FdAni;
    double dt = 1e-4;
    int steps = 0;  // M
    std::optional<aniso::AnisotropyModel> model;          // FdAni / FdBgn
    std::shared_ptr<const metric::MetricField> field;     // FdRiem / FdHypbol
    solver::NewtonSettings newton;
    Forcing forcing;  // FdAni only; empty = unforced
    RiemOptions riem;
    HypbolOptions hypbol;

    /// Sets steps from a final time T; T/dt must be integral.
    void set_horizon(double T);
};

enum class FlowStatus { Completed, Extinct };

struct FlowResult {
    geom::DiscreteCurve curve;
    FlowStatus status = FlowStatus::Completed;
    int steps_taken = 0;
};

/// Called at step 0 with a null report and after every executed step.
using StepCallback =
    std::function<void(int step, const geom::DiscreteCurve& curve, const StepReport* report)>;

/// Applies the configured step M times. Near extinction (minimal element
/// length below 1e-10 or lumped energy below 1e-12) the run ends cleanly with
/// FlowStatus::Extinct. Step errors are annotated with the step index.
FlowResult run_flow(const geom::DiscreteCurve& initial, const FlowConfig& config,
                    const std::vector<StepCallback>& observers = {});

/// One scheme step dispatched by config; curve time advances by dt.
StepReport advance(const geom::DiscreteCurve& curve, const FlowConfig& config);

/// Residual and Jacobian of the implicit step frozen at `curve`, as solved by
/// the step functions; exposed for Jacobian consistency tests and diagnostics.
struct AssembledStep {
    solver::ResidualFn residual;
    solver::JacobianFn jacobian;
};
AssembledStep assemble_step(const geom::DiscreteCurve& curve, const FlowConfig& config);

}  // namespace acsf::schemes

namespace acsf::harness {
class ExactSolution;
}

namespace acsf::schemes {

/// Forcing f = H0(x_rho) x_t - [Phi0'(x_rho)]_rho of a space-independent
/// model along an exact flow, in closed form via the chain rule
/// [Phi0'(x_rho)]_rho = Phi0''(x_rho) x_rhorho.
Forcing manufactured_forcing(const aniso::AnisotropyModel& model,
                             const harness::ExactSolution& exact);

}  // namespace acsf::schemes
