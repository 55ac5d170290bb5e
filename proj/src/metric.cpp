#include "acsf/metric.hpp"

#include <cmath>

#include "acsf/errors.hpp"

namespace acsf::metric {

double MetricField::conformal_factor(const Vec2&) const {
    throw DomainError("metric '" + name() + "' is not conformal");
}
Vec2 MetricField::conformal_grad(const Vec2&) const {
    throw DomainError("metric '" + name() + "' is not conformal");
}
Mat2 MetricField::conformal_hess(const Vec2&) const {
    throw DomainError("metric '" + name() + "' is not conformal");
}
double MetricField::height(const Vec2&) const {
    throw DomainError("metric '" + name() + "' has no graph embedding");
}

namespace {

class FlatMetric final : public MetricField {
  public:
    std::string name() const override { return "flat"; }
    bool admissible(const Vec2&) const override { return true; }
    Vec2 sample_point() const override { return {0.3, -0.2}; }

    Mat2 metric(const Vec2&) const override { return Mat2::identity(); }
    std::array<Mat2, 2> metric_grad(const Vec2&) const override { return {Mat2{}, Mat2{}}; }
    std::array<Mat2, 3> metric_hess(const Vec2&) const override {
        return {Mat2{}, Mat2{}, Mat2{}};
    }

    bool is_conformal() const override { return true; }
    double conformal_factor(const Vec2&) const override { return 1.0; }
    Vec2 conformal_grad(const Vec2&) const override { return {}; }
    Mat2 conformal_hess(const Vec2&) const override { return {}; }

    bool has_embedding() const override { return true; }
    double height(const Vec2&) const override { return 0.0; }
};

// Hyperbolic half plane model: g(z) = z1^{-2} on {z1 > 0}.
class HyperbolicMetric final : public MetricField {
  public:
    std::string name() const override { return "hyperbolic"; }
    bool admissible(const Vec2& z) const override { return z.x > 0.0; }
    Vec2 sample_point() const override { return {2.0, 0.0}; }

    Mat2 metric(const Vec2& z) const override {
        return Mat2::identity() * conformal_factor(z);
    }
    std::array<Mat2, 2> metric_grad(const Vec2& z) const override {
        const Vec2 g = conformal_grad(z);
        return {Mat2::identity() * g.x, Mat2::identity() * g.y};
    }
    std::array<Mat2, 3> metric_hess(const Vec2& z) const override {
        const Mat2 hh = conformal_hess(z);
        return {Mat2::identity() * hh.a11, Mat2::identity() * hh.a12,
                Mat2::identity() * hh.a22};
    }

    bool is_conformal() const override { return true; }
    double conformal_factor(const Vec2& z) const override { return 1.0 / (z.x * z.x); }
    Vec2 conformal_grad(const Vec2& z) const override {
        return {-2.0 / (z.x * z.x * z.x), 0.0};
    }
    Mat2 conformal_hess(const Vec2& z) const override {
        return {6.0 / (z.x * z.x * z.x * z.x), 0.0, 0.0, 0.0};
    }
};

// Third derivative tensor of a scalar height function, symmetric in all
// indices; stored by the four distinct entries.
struct HeightJet {
    double phi = 0.0;
    Vec2 grad;
    Mat2 hess;
    double d111 = 0.0, d112 = 0.0, d122 = 0.0, d222 = 0.0;

    double third(int i, int j, int k) const {
        const int ones = i + j + k;
        switch (ones) {
            case 0: return d111;
            case 1: return d112;
            case 2: return d122;
            default: return d222;
        }
    }
};

// Graph metric G = Id + grad(phi) x grad(phi). Derivatives of G need phi's
// Hessian and third derivatives.
class GraphMetric : public MetricField {
  public:
    virtual HeightJet height_jet(const Vec2& z) const = 0;

    Mat2 metric(const Vec2& z) const override {
        const HeightJet hj = height_jet(z);
        return Mat2::identity() + Mat2::outer(hj.grad, hj.grad);
    }

    std::array<Mat2, 2> metric_grad(const Vec2& z) const override {
        const HeightJet hj = height_jet(z);
        std::array<Mat2, 2> out;
        for (int i = 0; i < 2; ++i) {
            const Vec2 hi = hess_col(hj, i);
            out[i] = Mat2::outer(hi, hj.grad) + Mat2::outer(hj.grad, hi);
        }
        return out;
    }

    std::array<Mat2, 3> metric_hess(const Vec2& z) const override {
        const HeightJet hj = height_jet(z);
        std::array<Mat2, 3> out;
        int idx = 0;
        for (int i = 0; i < 2; ++i) {
            for (int j = i; j < 2; ++j) {
                const Vec2 hi = hess_col(hj, i);
                const Vec2 hk = hess_col(hj, j);
                const Vec2 t{hj.third(0, i, j), hj.third(1, i, j)};
                out[idx++] = Mat2::outer(t, hj.grad) + Mat2::outer(hj.grad, t) +
                             Mat2::outer(hi, hk) + Mat2::outer(hk, hi);
            }
        }
        return out;
    }

    bool has_embedding() const override { return true; }
    double height(const Vec2& z) const override { return height_jet(z).phi; }

  private:
    static Vec2 hess_col(const HeightJet& hj, int i) {
        return i == 0 ? Vec2{hj.hess.a11, hj.hess.a21} : Vec2{hj.hess.a12, hj.hess.a22};
    }
};

constexpr double kApexGuard = 1e-8;

class ConeMetric final : public GraphMetric {
  public:
    explicit ConeMetric(double slope) : b_(slope) {
        if (b_ < 0.0) throw ConfigError("cone: slope must be nonnegative");
    }

    std::string name() const override { return "cone"; }
    bool admissible(const Vec2& z) const override { return z.norm() > kApexGuard; }
    Vec2 sample_point() const override { return {1.0, 0.0}; }

    HeightJet height_jet(const Vec2& z) const override {
        const double r = z.norm();
        if (!(r > kApexGuard)) throw DomainError("cone: point at the apex");
        const double r3 = r * r * r;
        const double r5 = r3 * r * r;
        HeightJet hj;
        hj.phi = b_ * r;
        hj.grad = z * (b_ / r);
        hj.hess = (Mat2::identity() * (1.0 / r) - Mat2::outer(z, z) * (1.0 / r3)) * b_;
        auto d3 = [&](double zi, double zj, double zk, int dij, int dik, int djk) {
            return b_ * (-(dij * zk + dik * zj + djk * zi) / r3 + 3.0 * zi * zj * zk / r5);
        };
        hj.d111 = d3(z.x, z.x, z.x, 1, 1, 1);
        hj.d112 = d3(z.x, z.x, z.y, 1, 0, 0);
        hj.d122 = d3(z.x, z.y, z.y, 0, 0, 1);
        hj.d222 = d3(z.y, z.y, z.y, 1, 1, 1);
        return hj;
    }

  private:
    double b_;
};

// Bump profile psi(s) = exp(-1/(1-s)) for s < 1, 0 otherwise, with its first
// three derivatives. With u = 1/(1-s):
//   psi'   = -u^2 e^{-u}
//   psi''  = (u^4 - 2u^3) e^{-u}
//   psi''' = (-u^6 + 6u^5 - 6u^4) e^{-u}
// For u beyond 500 every value is below 1e-200; returning exact zeros there
// avoids overflow of the polynomial factors.
struct Bump {
    double v = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

Bump bump(double s) {
    if (s >= 1.0) return {};
    const double u = 1.0 / (1.0 - s);
    if (u >= 500.0) return {};
    const double e = std::exp(-u);
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u, u6 = u5 * u;
    return {e, -u2 * e, (u4 - 2.0 * u3) * e, (-u6 + 6.0 * u5 - 6.0 * u4) * e};
}

class TwoMountainsMetric final : public GraphMetric {
  public:
    TwoMountainsMetric(double l1, double l2) : l1_(l1), l2_(l2) {
        if (l1_ < 0.0 || l2_ < 0.0)
            throw ConfigError("two_mountains: heights must be nonnegative");
    }

    std::string name() const override { return "two_mountains"; }
    bool admissible(const Vec2&) const override { return true; }
    Vec2 sample_point() const override { return {0.5, 0.3}; }

    HeightJet height_jet(const Vec2& z) const override {
        HeightJet hj;
        accumulate(hj, z, Vec2{0.0, 0.0}, l1_);
        accumulate(hj, z, Vec2{2.0, 0.0}, l2_);
        return hj;
    }

  private:
    // Adds lambda * psi(|z-c|^2) and its derivatives; s_i = 2 w_i, s_ij = 2 delta_ij.
    static void accumulate(HeightJet& hj, const Vec2& z, const Vec2& c, double lambda) {
        const Vec2 w = z - c;
        const Bump b = bump(w.norm2());
        hj.phi += lambda * b.v;
        hj.grad += w * (2.0 * lambda * b.d1);
        hj.hess += Mat2::outer(w, w) * (4.0 * lambda * b.d2) +
                   Mat2::identity() * (2.0 * lambda * b.d1);
        auto d3 = [&](double wi, double wj, double wk, int dij, int dik, int djk) {
            return lambda * (8.0 * b.d3 * wi * wj * wk +
                             4.0 * b.d2 * (dij * wk + dik * wj + djk * wi));
        };
        hj.d111 += d3(w.x, w.x, w.x, 1, 1, 1);
        hj.d112 += d3(w.x, w.x, w.y, 1, 0, 0);
        hj.d122 += d3(w.x, w.y, w.y, 0, 0, 1);
        hj.d222 += d3(w.y, w.y, w.y, 1, 1, 1);
    }

    double l1_, l2_;
};

}  // namespace

std::shared_ptr<const MetricField> make_flat() { return std::make_shared<FlatMetric>(); }
std::shared_ptr<const MetricField> make_hyperbolic() {
    return std::make_shared<HyperbolicMetric>();
}
std::shared_ptr<const MetricField> make_cone(double slope) {
    return std::make_shared<ConeMetric>(slope);
}
std::shared_ptr<const MetricField> make_two_mountains(double l1, double l2) {
    return std::make_shared<TwoMountainsMetric>(l1, l2);
}

MetricEval metric_eval(const MetricField& field, const Vec2& z) {
    if (!field.admissible(z))
        throw DomainError("metric_eval: point outside the domain of '" + field.name() + "'");
    MetricEval e;
    e.G = field.metric(z);
    const auto grads = field.metric_grad(z);
    e.Gz1 = grads[0];
    e.Gz2 = grads[1];
    e.det = e.G.det();
    return e;
}

ConvexSplitting::ConvexSplitting(const MetricField& field, double c)
    : field_(field), c_(c) {
    if (c_ < 0.0) throw ConfigError("convex splitting: shift must be nonnegative");
}

Mat2 ConvexSplitting::plus(const Vec2& z) const {
    return field_.metric(z) + Mat2::identity() * (c_ * z.norm2());
}

std::array<Mat2, 2> ConvexSplitting::plus_grad(const Vec2& z) const {
    auto g = field_.metric_grad(z);
    if (c_ != 0.0) {
        g[0] += Mat2::identity() * (2.0 * c_ * z.x);
        g[1] += Mat2::identity() * (2.0 * c_ * z.y);
    }
    return g;
}

std::array<Mat2, 3> ConvexSplitting::plus_hess(const Vec2& z) const {
    auto hh = field_.metric_hess(z);
    if (c_ != 0.0) {
        hh[0] += Mat2::identity() * (2.0 * c_);
        hh[2] += Mat2::identity() * (2.0 * c_);
    }
    return hh;
}

Mat2 ConvexSplitting::minus(const Vec2& z) const {
    return Mat2::identity() * (-c_ * z.norm2());
}

std::array<Mat2, 2> ConvexSplitting::minus_grad(const Vec2& z) const {
    return {Mat2::identity() * (-2.0 * c_ * z.x), Mat2::identity() * (-2.0 * c_ * z.y)};
}

ChristoffelData christoffel(const MetricField& field, const Vec2& z) {
    if (!field.admissible(z))
        throw DomainError("christoffel: point outside the domain of '" + field.name() + "'");
    const Mat2 G = field.metric(z);
    const Mat2 Ginv = G.inverse();
    const auto Gz = field.metric_grad(z);
    auto dg = [&](int i, int j, int l) { return Gz[i](j, l); };  // g_{jl,z_i}
    ChristoffelData cd;
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            for (int j = i; j < 2; ++j) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    s += Ginv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
                cd.gamma[k][i][j] = 0.5 * s;
                cd.gamma[k][j][i] = cd.gamma[k][i][j];
            }
        }
    }
    return cd;
}

std::vector<double> geodesic_curvature(const MetricField& field,
                                       const geom::DiscreteCurve& curve) {
    const int J = curve.size();
    std::vector<double> kg(J);
    for (int j = 0; j < J; ++j) {
        const Vec2& z = curve.positions[j];
        if (!field.admissible(z))
            throw DomainError("geodesic_curvature: node " + std::to_string(j) +
                              " outside the domain of '" + field.name() + "'");
        const geom::NodeGeometry ng = geom::node_geometry(curve, j);
        const Mat2 G = field.metric(z);
        const ChristoffelData cd = christoffel(field, z);
        const double gamma = std::sqrt(G.inverse().quad(ng.normal, ng.normal));
        double conn = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    conn += cd(k, a, b) * ng.tangent[a] * ng.tangent[b] * ng.normal[k];
        kg[j] = (ng.curvature + conn) / (gamma * G.quad(ng.tangent, ng.tangent));
    }
    return kg;
}

std::vector<std::array<double, 3>> graph_embed(const MetricField& field,
                                               const geom::DiscreteCurve& curve) {
    if (!field.has_embedding())
        throw DomainError("graph_embed: metric '" + field.name() + "' has no graph embedding");
    std::vector<std::array<double, 3>> out(curve.size());
    for (int j = 0; j < curve.size(); ++j) {
        const Vec2& z = curve.positions[j];
        out[j] = {z.x, z.y, field.height(z)};
    }
    return out;
}

}  // namespace acsf::metric
