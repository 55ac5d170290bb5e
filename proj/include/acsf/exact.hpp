#pragma once

#include <string>

#include "acsf/geom.hpp"
#include "acsf/vec2.hpp"

namespace acsf::harness {

/// Closed-form reference flows used by the convergence and validation runs:
///  - WulffEllipse: self-similarly shrinking Wulff boundary of the elliptic
///    density, x(rho,t) = sqrt(1-2t) (cos 2 pi rho, delta sin 2 pi rho)
///  - ConeCircle: concentric circles under geodesic curvature flow on the
///    cone of slope b, radius r(t) = sqrt(r0^2 - 2t/(1+b^2))
///  - HyperbolicCircle: translating and shrinking circles in the hyperbolic
///    half plane, center (a0 e^{-t}, 0), r(t) = sqrt(r0^2 - a0^2(1-e^{-2t}))
class ExactSolution {
  public:
    enum class Kind { WulffEllipse, ConeCircle, HyperbolicCircle };

    static ExactSolution wulff_ellipse(double delta);
    static ExactSolution cone_circle(double slope, double r0);
    static ExactSolution hyperbolic_circle(double a0, double r0);

    Kind kind() const { return kind_; }
    std::string description() const;

    Vec2 position(double rho, double t) const;
    Vec2 d_rho(double rho, double t) const;
    Vec2 d_rhorho(double rho, double t) const;
    Vec2 d_t(double rho, double t) const;

    /// Time at which the curve degenerates to a point.
    double extinction_time() const;

    /// Center (a(t), 0) of the hyperbolic circle family.
    double hyperbolic_center(double t) const;
    /// Radius of the circle families at time t.
    double radius(double t) const;

    /// View at a fixed time, for error norms.
    geom::ParametricCurve at_time(double t) const;
    /// Nodal interpolant at time t.
    geom::DiscreteCurve interpolate(int J, double t) const;

  private:
    ExactSolution(Kind kind, double p1, double p2);
    void require_alive(double t) const;

    Kind kind_;
    double delta_ = 0.0;  // WulffEllipse
    double b_ = 0.0;      // ConeCircle slope
    double r0_ = 0.0;     // initial radius
    double a0_ = 0.0;     // HyperbolicCircle initial center
};

}  // namespace acsf::harness
