#include "acsf/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace acsf::geom {

PeriodicMesh::PeriodicMesh(int node_count) : J_(node_count) {
    if (J_ < 3) throw ConfigError("PeriodicMesh: need at least 3 nodes, got " + std::to_string(J_));
}

DiscreteCurve::DiscreteCurve(PeriodicMesh m, std::vector<Vec2> pos, double t)
    : mesh(m), positions(std::move(pos)), time(t) {
    if (static_cast<int>(positions.size()) != mesh.size())
        throw ConfigError("DiscreteCurve: position count does not match mesh size");
}

ElementField<Vec2> element_derivative(const DiscreteCurve& curve) {
    const int J = curve.size();
    ElementField<Vec2> d;
    d.values.resize(J);
    for (int j = 0; j < J; ++j) d.values[j] = curve.chord(j) * static_cast<double>(J);
    return d;
}

double min_element_length(const DiscreteCurve& curve) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < curve.size(); ++j) m = std::min(m, curve.chord(j).norm());
    return m;
}

double max_element_length(const DiscreteCurve& curve) {
    double m = 0.0;
    for (int j = 0; j < curve.size(); ++j) m = std::max(m, curve.chord(j).norm());
    return m;
}

double ratio(const DiscreteCurve& curve) {
    const double lo = min_element_length(curve);
    if (lo <= 0.0) throw DegenerateMeshError("ratio: zero-length element");
    return max_element_length(curve) / lo;
}

double lumped_inner(const LumpedField<double>& u, const LumpedField<double>& v,
                    const PeriodicMesh& mesh) {
    const int J = mesh.size();
    if (static_cast<int>(u.minus.size()) != J || static_cast<int>(v.minus.size()) != J ||
        static_cast<int>(u.plus.size()) != J || static_cast<int>(v.plus.size()) != J)
        throw ConfigError("lumped_inner: field size does not match mesh");
    double s = 0.0;
    for (int j = 0; j < J; ++j) s += u.minus[j] * v.minus[j] + u.plus[j] * v.plus[j];
    return 0.5 * mesh.h() * s;
}

double lumped_inner(const LumpedField<Vec2>& u, const LumpedField<Vec2>& v,
                    const PeriodicMesh& mesh) {
    const int J = mesh.size();
    if (static_cast<int>(u.minus.size()) != J || static_cast<int>(v.minus.size()) != J ||
        static_cast<int>(u.plus.size()) != J || static_cast<int>(v.plus.size()) != J)
        throw ConfigError("lumped_inner: field size does not match mesh");
    double s = 0.0;
    for (int j = 0; j < J; ++j) s += dot(u.minus[j], v.minus[j]) + dot(u.plus[j], v.plus[j]);
    return 0.5 * mesh.h() * s;
}

NodeGeometry node_geometry(const DiscreteCurve& curve, int j) {
    const double h = curve.mesh.h();
    const Vec2& xm = curve.positions[curve.mesh.prev(j)];
    const Vec2& x0 = curve.positions[j];
    const Vec2& xp = curve.positions[curve.mesh.next(j)];
    const Vec2 d1 = (xp - xm) / (2.0 * h);
    const Vec2 d2 = (xp - x0 * 2.0 + xm) / (h * h);
    const double len = d1.norm();
    if (!(len > 0.0)) throw DegenerateMeshError("node_geometry: vanishing tangent");
    NodeGeometry g;
    g.tangent = d1 / len;
    g.normal = g.tangent.perp();
    g.curvature = dot(d2, g.normal) / (len * len);
    return g;
}

namespace {
// 3-point Gauss-Legendre rule on [0,1].
constexpr double kGaussNode[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kGaussWeight[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
}  // namespace

ErrorNorms error_norms(const DiscreteCurve& curve, const ParametricCurve& exact) {
    const int J = curve.size();
    const double h = curve.mesh.h();
    double l2sq = 0.0;
    double semisq = 0.0;
    for (int j = 0; j < J; ++j) {
        const Vec2 a = curve.positions[curve.mesh.prev(j)];
        const Vec2 b = curve.positions[j];
        const Vec2 deriv = (b - a) / h;
        const double rho0 = curve.mesh.node(j) - h;  // left end, may be negative for j=0
        for (int g = 0; g < 3; ++g) {
            const double xi = kGaussNode[g];
            double rho = rho0 + xi * h;
            if (rho < 0.0) rho += 1.0;
            const Vec2 xh = a + (b - a) * xi;
            const Vec2 de = exact.position(rho) - xh;
            const Vec2 dd = exact.derivative(rho) - deriv;
            l2sq += kGaussWeight[g] * h * de.norm2();
            semisq += kGaussWeight[g] * h * dd.norm2();
        }
    }
    return {std::sqrt(l2sq), std::sqrt(l2sq + semisq)};
}

DiscreteCurve interpolate(const ParametricCurve& curve, int J, double time) {
    PeriodicMesh mesh(J);
    std::vector<Vec2> pos(J);
    for (int j = 0; j < J; ++j) pos[j] = curve.position(mesh.node(j));
    return {mesh, std::move(pos), time};
}

DiscreteCurve make_circle(int J, Vec2 center, double radius) {
    PeriodicMesh mesh(J);
    std::vector<Vec2> pos(J);
    for (int j = 0; j < J; ++j) {
        const double a = 2.0 * std::numbers::pi * mesh.node(j);
        pos[j] = center + Vec2{radius * std::cos(a), radius * std::sin(a)};
    }
    return {mesh, std::move(pos)};
}

DiscreteCurve equidistribute(const std::vector<Vec2>& dense, int J, double time) {
    const int n = static_cast<int>(dense.size());
    if (n < 3) throw ConfigError("equidistribute: need at least 3 input points");
    std::vector<double> s(n + 1, 0.0);
    for (int i = 0; i < n; ++i) s[i + 1] = s[i] + (dense[(i + 1) % n] - dense[i]).norm();
    const double total = s[n];
    if (!(total > 0.0)) throw DegenerateMeshError("equidistribute: curve has zero length");

    PeriodicMesh mesh(J);
    std::vector<Vec2> pos(J);
    int seg = 0;
    for (int j = 0; j < J; ++j) {
        const double target = total * j / J;
        while (seg + 1 < n && s[seg + 1] < target) ++seg;
        const double len = s[seg + 1] - s[seg];
        const double t = len > 0.0 ? (target - s[seg]) / len : 0.0;
        pos[j] = dense[seg] + (dense[(seg + 1) % n] - dense[seg]) * t;
    }
    return {mesh, std::move(pos), time};
}

}  // namespace acsf::geom
