#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "acsf/geom.hpp"
#include "acsf/vec2.hpp"

namespace acsf::metric {

/// Riemannian metric G(z) on a planar chart, symmetric positive definite on
/// the admissible domain, with analytic first and second z-derivatives. The
/// second derivatives feed the Newton Jacobians of the implicit schemes.
class MetricField {
  public:
    virtual ~MetricField() = default;

    virtual std::string name() const = 0;
    virtual bool admissible(const Vec2& z) const = 0;
    /// A representative admissible point, used by sampling-based checks.
    virtual Vec2 sample_point() const = 0;

    virtual Mat2 metric(const Vec2& z) const = 0;
    /// G_{z1}, G_{z2}.
    virtual std::array<Mat2, 2> metric_grad(const Vec2& z) const = 0;
    /// G_{z1 z1}, G_{z1 z2}, G_{z2 z2}.
    virtual std::array<Mat2, 3> metric_hess(const Vec2& z) const = 0;

    /// Conformal metrics expose G(z) = g(z) Id through the scalar factor.
    virtual bool is_conformal() const { return false; }
    virtual double conformal_factor(const Vec2& z) const;
    virtual Vec2 conformal_grad(const Vec2& z) const;
    virtual Mat2 conformal_hess(const Vec2& z) const;

    /// Graph metrics carry the embedding F(z) = (z1, z2, phi(z)).
    virtual bool has_embedding() const { return false; }
    virtual double height(const Vec2& z) const;
};

/// Flat plane, G = Id (conformal factor 1, graph of phi = 0).
std::shared_ptr<const MetricField> make_flat();
/// Hyperbolic half plane, G = z1^{-2} Id on {z1 > 0}. Not embeddable in R^3.
std::shared_ptr<const MetricField> make_hyperbolic();
/// Right circular cone, phi(z) = b |z| on R^2 minus a small disk at the apex.
std::shared_ptr<const MetricField> make_cone(double slope);
/// Graph with two C^infinity bumps of heights l1 at the origin and l2 at (2,0).
std::shared_ptr<const MetricField> make_two_mountains(double l1, double l2);

struct MetricEval {
    Mat2 G;
    Mat2 Gz1;
    Mat2 Gz2;
    double det = 0.0;
};

/// G, its first derivatives and det G at an admissible point; throws
/// DomainError outside the domain.
MetricEval metric_eval(const MetricField& field, const Vec2& z);

/// Splitting G = G_plus + G_minus with +-G_pm convex, realized as
/// G_plus = G + c |z|^2 Id and G_minus = -c |z|^2 Id for a shift c >= 0.
/// The default c = 0 keeps G_plus = G. Holds a reference; the field must
/// outlive the splitting.
class ConvexSplitting {
  public:
    explicit ConvexSplitting(const MetricField& field, double c = 0.0);

    double shift() const { return c_; }
    const MetricField& field() const { return field_; }

    Mat2 plus(const Vec2& z) const;
    std::array<Mat2, 2> plus_grad(const Vec2& z) const;
    std::array<Mat2, 3> plus_hess(const Vec2& z) const;
    Mat2 minus(const Vec2& z) const;
    std::array<Mat2, 2> minus_grad(const Vec2& z) const;

  private:
    const MetricField& field_;
    double c_;
};

/// Christoffel symbols Gamma^k_{ij}(z), symmetric in (i,j).
struct ChristoffelData {
    double gamma[2][2][2] = {};  // gamma[k][i][j]

    double operator()(int k, int i, int j) const { return gamma[k][i][j]; }
};

ChristoffelData christoffel(const MetricField& field, const Vec2& z);

/// Geodesic curvature of the embedded curve at every node,
///   kappa_g = (kappa + Gamma^k_{ij} tau_i tau_j nu_k) / (gamma(x,nu) G tau.tau),
/// with tau, nu, kappa from centered differences and gamma the induced
/// density sqrt(G^{-1} nu.nu). Serves as the independent oracle for the
/// anisotropic curvature of the induced model.
std::vector<double> geodesic_curvature(const MetricField& field, const geom::DiscreteCurve& curve);

/// Node positions mapped through the graph embedding, for 3D snapshots.
std::vector<std::array<double, 3>> graph_embed(const MetricField& field,
                                               const geom::DiscreteCurve& curve);

}  // namespace acsf::metric
