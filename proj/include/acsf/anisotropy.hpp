#pragma once

#include <memory>
#include <string>
#include <vector>

#include "acsf/geom.hpp"
#include "acsf/metric.hpp"
#include "acsf/vec2.hpp"

namespace acsf::aniso {

/// Full first/second derivative data of the density gamma(z,p) at a point.
/// gamma is positively one-homogeneous in p, which forces
///   grad_p . p = gamma   and   hess_p p = 0.
struct DensityJet {
    double value = 0.0;
    Vec2 grad_p;     // gamma_p
    Mat2 hess_p;     // gamma_pp
    Vec2 grad_z;     // gamma_z
    Mat2 mixed_pz;   // entries gamma_{p_i z_j}
};

/// Jet of Phi(z,p) = 1/2 a^2(z) gamma^2(z, p_perp), the 2-homogeneous
/// potential driving the reparameterized flow. Satisfies grad_p . p = 2 Phi
/// and hess_p p = grad_p.
struct PhiJet {
    double value = 0.0;
    Vec2 grad_p;    // Phi_p
    Vec2 grad_z;    // Phi_z
    Mat2 hess_p;    // Phi_pp
    Mat2 mixed_pz;  // columns Phi_{p z_j}
};

enum class DensityKind { Isotropic, SmoothKFold, Bgn, MetricInduced };

/// Anisotropy density family gamma(z,p) with spatial weight a(z):
///  - Isotropic:     gamma = |p|, a = 1
///  - SmoothKFold:   gamma = |p| (1 + delta cos(k theta(p))), a = 1
///  - Bgn:           gamma = sum_l sqrt(Lambda_l p . p), a = 1, with symmetric
///                   positive definite matrices Lambda_l
///  - MetricInduced: gamma = sqrt(G^{-1}(z) p . p), a = sqrt(det G(z))
class AnisotropyModel {
  public:
    static AnisotropyModel isotropic();
    static AnisotropyModel smooth_kfold(int k, double delta);
    static AnisotropyModel bgn(std::vector<Mat2> lambdas);
    static AnisotropyModel metric_induced(std::shared_ptr<const metric::MetricField> field);

    /// Regularized k-fold crystalline family: L rotated copies of
    /// diag(1, delta^2), whose Wulff shape tends to the regular 2L-gon as
    /// delta -> 0.
    static AnisotropyModel bgn_regular(int L, double delta);
    /// Single-matrix family sqrt(p1^2 + delta^2 p2^2).
    static AnisotropyModel elliptic(double delta);

    DensityKind kind() const { return kind_; }
    bool space_independent() const { return kind_ != DensityKind::MetricInduced; }
    std::string description() const;

    bool admissible(const Vec2& z) const;

    /// gamma(z,p); cheap path without derivatives.
    double value(const Vec2& z, const Vec2& p) const;
    DensityJet jet(const Vec2& z, const Vec2& p) const;

    double weight(const Vec2& z) const;       // a(z)
    Vec2 weight_grad(const Vec2& z) const;    // grad a

    int kfold_k() const { return k_; }
    double kfold_delta() const { return delta_; }
    const std::vector<Mat2>& bgn_lambdas() const { return lambdas_; }
    const std::vector<Mat2>& bgn_tildes() const { return tildes_; }
    const metric::MetricField* field() const { return field_.get(); }
    std::shared_ptr<const metric::MetricField> field_ptr() const { return field_; }

  private:
    AnisotropyModel() = default;

    DensityKind kind_ = DensityKind::Isotropic;
    int k_ = 0;
    double delta_ = 0.0;
    std::vector<Mat2> lambdas_;
    std::vector<Mat2> tildes_;  // det(Lambda) Lambda^{-1}
    std::shared_ptr<const metric::MetricField> field_;
};

/// Derivatives of gamma at (z,p); p must be nonzero, z admissible.
DensityJet density_jet(const AnisotropyModel& model, const Vec2& z, const Vec2& p);

/// Phi(z,p) without derivatives (defined for every p by 2-homogeneity).
double phi_value(const AnisotropyModel& model, const Vec2& z, const Vec2& p);

/// Full jet of Phi; requires p != 0 for the Hessian.
PhiJet phi_jet(const AnisotropyModel& model, const Vec2& z, const Vec2& p);

/// The positive definite system matrix of the reparameterized flow,
///   H(z,p) = a^2 gamma(z,q) / |gamma_p(z,q)|^2 *
///            [ gamma(z,q), gamma_p(z,q).p ; -gamma_p(z,q).p, gamma(z,q) ],
/// with q = p_perp. H has equal diagonal and antisymmetric off-diagonal, and
///   H w.w = a^2 gamma^2(z,q) / |gamma_p(z,q)|^2 |w|^2  for every w.
Mat2 h_matrix(const AnisotropyModel& model, const Vec2& z, const Vec2& p);

/// Closed form of H for a metric-induced density,
///   H = det G (G p.p) / |G p|^2 [ G p.p, -G p.p_perp ; G p.p_perp, G p.p ].
/// Equals h_matrix of the induced model; kept as an independent route.
Mat2 h_matrix_riemannian(const metric::MetricField& field, const Vec2& z, const Vec2& p);

/// Frozen-coefficient matrix of the linearly solvable scheme for Bgn models:
/// B(p) p = Phi_p(p) for p != 0, and B(q) p.(p-q) >= Phi(p) - Phi(q).
Mat2 b_matrix(const AnisotropyModel& model, const Vec2& p);

/// Dual density gamma0*(q) = sup_p p.q / gamma0(p) for space-independent
/// models, by angular grid search plus golden-section refinement.
double dual_value(const AnisotropyModel& model, const Vec2& q);

/// n points on the Wulff boundary {gamma0* = 1}, anticlockwise.
std::vector<Vec2> sample_wulff(const AnisotropyModel& model, int n);
/// n points on the Frank boundary {gamma0 = 1}, anticlockwise.
std::vector<Vec2> sample_frank(const AnisotropyModel& model, int n);

struct ConvexityReport {
    bool convex = false;
    double min_form = 0.0;  // smallest sampled/analytic value of gamma_pp q.q
    Vec2 witness;           // direction p attaining it (meaningful when !convex)
};

/// Strict convexity check: gamma_pp(z,p) q.q > 0 for orthonormal p,q.
/// Analytic for SmoothKFold (delta < 1/(k^2-1)), sampled on an angular grid
/// of at least 720 directions otherwise.
ConvexityReport assert_convex(const AnisotropyModel& model);

/// Anisotropic curvature at every node,
///   kappa_gamma = kappa gamma_pp(.,nu) tau.tau - gamma_{p_i z_i}(.,nu)
///                 - (grad a / a) . gamma_p(.,nu),
/// with tau, nu, kappa from centered differences. Diagnostic; for
/// metric-induced models it coincides with the geodesic curvature.
std::vector<double> anisotropic_curvature(const AnisotropyModel& model,
                                          const geom::DiscreteCurve& curve);

}  // namespace acsf::aniso
