#include "acsf/exact.hpp"

#include <cmath>
#include <numbers>

#include "acsf/errors.hpp"

namespace acsf::harness {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ExactSolution::ExactSolution(Kind kind, double p1, double p2) : kind_(kind) {
    switch (kind_) {
        case Kind::WulffEllipse:
            delta_ = p1;
            break;
        case Kind::ConeCircle:
            b_ = p1;
            r0_ = p2;
            break;
        case Kind::HyperbolicCircle:
            a0_ = p1;
            r0_ = p2;
            break;
    }
}

ExactSolution ExactSolution::wulff_ellipse(double delta) {
    if (!(delta > 0.0)) throw ConfigError("wulff_ellipse: delta must be > 0");
    return {Kind::WulffEllipse, delta, 0.0};
}

ExactSolution ExactSolution::cone_circle(double slope, double r0) {
    if (slope < 0.0 || !(r0 > 0.0)) throw ConfigError("cone_circle: invalid parameters");
    return {Kind::ConeCircle, slope, r0};
}

ExactSolution ExactSolution::hyperbolic_circle(double a0, double r0) {
    if (!(a0 > r0) || !(r0 > 0.0))
        throw ConfigError("hyperbolic_circle: need a0 > r0 > 0");
    return {Kind::HyperbolicCircle, a0, r0};
}

std::string ExactSolution::description() const {
    switch (kind_) {
        case Kind::WulffEllipse: return "wulff_ellipse(delta=" + std::to_string(delta_) + ")";
        case Kind::ConeCircle:
            return "cone_circle(b=" + std::to_string(b_) + ",r0=" + std::to_string(r0_) + ")";
        case Kind::HyperbolicCircle:
            return "hyperbolic_circle(a0=" + std::to_string(a0_) +
                   ",r0=" + std::to_string(r0_) + ")";
    }
    return "?";
}

double ExactSolution::extinction_time() const {
    switch (kind_) {
        case Kind::WulffEllipse: return 0.5;
        case Kind::ConeCircle: return 0.5 * r0_ * r0_ * (1.0 + b_ * b_);
        case Kind::HyperbolicCircle: {
            // r^2(t) = r0^2 - a0^2 (1 - e^{-2t}) hits zero at
            // t = -1/2 log(1 - r0^2/a0^2).
            return -0.5 * std::log(1.0 - r0_ * r0_ / (a0_ * a0_));
        }
    }
    return 0.0;
}

void ExactSolution::require_alive(double t) const {
    if (t < 0.0 || t >= extinction_time())
        throw DomainError("exact solution evaluated at or past extinction, t=" +
                          std::to_string(t));
}

double ExactSolution::hyperbolic_center(double t) const {
    if (kind_ != Kind::HyperbolicCircle)
        throw DomainError("hyperbolic_center: not a hyperbolic circle family");
    return a0_ * std::exp(-t);
}

double ExactSolution::radius(double t) const {
    require_alive(t);
    switch (kind_) {
        case Kind::WulffEllipse: return std::sqrt(1.0 - 2.0 * t);
        case Kind::ConeCircle: return std::sqrt(r0_ * r0_ - 2.0 * t / (1.0 + b_ * b_));
        case Kind::HyperbolicCircle: {
            const double e = std::exp(-2.0 * t);
            return std::sqrt(r0_ * r0_ - a0_ * a0_ * (1.0 - e));
        }
    }
    return 0.0;
}

Vec2 ExactSolution::position(double rho, double t) const {
    require_alive(t);
    const double c = std::cos(kTwoPi * rho);
    const double s = std::sin(kTwoPi * rho);
    switch (kind_) {
        case Kind::WulffEllipse: {
            const double f = std::sqrt(1.0 - 2.0 * t);
            return {f * c, f * delta_ * s};
        }
        case Kind::ConeCircle: {
            const double r = radius(t);
            return {r * c, r * s};
        }
        case Kind::HyperbolicCircle: {
            const double r = radius(t);
            return {hyperbolic_center(t) + r * c, r * s};
        }
    }
    return {};
}

Vec2 ExactSolution::d_rho(double rho, double t) const {
    require_alive(t);
    const double c = std::cos(kTwoPi * rho);
    const double s = std::sin(kTwoPi * rho);
    switch (kind_) {
        case Kind::WulffEllipse: {
            const double f = std::sqrt(1.0 - 2.0 * t);
            return {-kTwoPi * f * s, kTwoPi * f * delta_ * c};
        }
        case Kind::ConeCircle:
        case Kind::HyperbolicCircle: {
            const double r = radius(t);
            return {-kTwoPi * r * s, kTwoPi * r * c};
        }
    }
    return {};
}

Vec2 ExactSolution::d_rhorho(double rho, double t) const {
    require_alive(t);
    const double c = std::cos(kTwoPi * rho);
    const double s = std::sin(kTwoPi * rho);
    const double w2 = kTwoPi * kTwoPi;
    switch (kind_) {
        case Kind::WulffEllipse: {
            const double f = std::sqrt(1.0 - 2.0 * t);
            return {-w2 * f * c, -w2 * f * delta_ * s};
        }
        case Kind::ConeCircle:
        case Kind::HyperbolicCircle: {
            const double r = radius(t);
            return {-w2 * r * c, -w2 * r * s};
        }
    }
    return {};
}

Vec2 ExactSolution::d_t(double rho, double t) const {
    require_alive(t);
    const double c = std::cos(kTwoPi * rho);
    const double s = std::sin(kTwoPi * rho);
    switch (kind_) {
        case Kind::WulffEllipse: {
            const double df = -1.0 / std::sqrt(1.0 - 2.0 * t);
            return {df * c, df * delta_ * s};
        }
        case Kind::ConeCircle: {
            const double dr = -1.0 / ((1.0 + b_ * b_) * radius(t));
            return {dr * c, dr * s};
        }
        case Kind::HyperbolicCircle: {
            const double e = std::exp(-2.0 * t);
            const double r = radius(t);
            const double dr = -a0_ * a0_ * e / r;
            const double da = -hyperbolic_center(t);
            return {da + dr * c, dr * s};
        }
    }
    return {};
}

geom::ParametricCurve ExactSolution::at_time(double t) const {
    require_alive(t);
    return {[*this, t](double rho) { return position(rho, t); },
            [*this, t](double rho) { return d_rho(rho, t); }};
}

geom::DiscreteCurve ExactSolution::interpolate(int J, double t) const {
    return geom::interpolate(at_time(t), J, t);
}

}  // namespace acsf::harness
