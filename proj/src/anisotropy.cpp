#include "acsf/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acsf/errors.hpp"

namespace acsf::aniso {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonzero(const Vec2& p, const char* where) {
    if (p.x == 0.0 && p.y == 0.0) throw DomainError(std::string(where) + ": p must be nonzero");
}

// Rotation by +pi/2 applied to both sides of a matrix: R^T M R with R v = v_perp.
Mat2 rotate_form(const Mat2& m) { return {m.a22, -m.a21, -m.a12, m.a11}; }

}  // namespace

AnisotropyModel AnisotropyModel::isotropic() {
    AnisotropyModel m;
    m.kind_ = DensityKind::Isotropic;
    return m;
}

AnisotropyModel AnisotropyModel::smooth_kfold(int k, double delta) {
    if (k < 2) throw ConfigError("smooth_kfold: k must be >= 2");
    if (delta < 0.0) throw ConfigError("smooth_kfold: delta must be >= 0");
    AnisotropyModel m;
    m.kind_ = DensityKind::SmoothKFold;
    m.k_ = k;
    m.delta_ = delta;
    return m;
}

AnisotropyModel AnisotropyModel::bgn(std::vector<Mat2> lambdas) {
    if (lambdas.empty()) throw ConfigError("bgn: need at least one matrix");
    AnisotropyModel m;
    m.kind_ = DensityKind::Bgn;
    for (const Mat2& L : lambdas) {
        const double scale = L.max_abs();
        if (std::abs(L.a12 - L.a21) > 1e-12 * scale)
            throw ConfigError("bgn: matrices must be symmetric");
        if (!(L.det() > 0.0) || !(L.trace() > 0.0))
            throw ConfigError("bgn: matrices must be positive definite");
        // det(L) L^{-1} is the adjugate.
        m.tildes_.push_back({L.a22, -L.a12, -L.a21, L.a11});
    }
    m.lambdas_ = std::move(lambdas);
    return m;
}

AnisotropyModel AnisotropyModel::metric_induced(
    std::shared_ptr<const metric::MetricField> field) {
    if (!field) throw ConfigError("metric_induced: null field");
    AnisotropyModel m;
    m.kind_ = DensityKind::MetricInduced;
    m.field_ = std::move(field);
    return m;
}

AnisotropyModel AnisotropyModel::bgn_regular(int L, double delta) {
    if (L < 1) throw ConfigError("bgn_regular: L must be >= 1");
    if (!(delta > 0.0)) throw ConfigError("bgn_regular: delta must be > 0");
    std::vector<Mat2> lambdas;
    const Mat2 D = Mat2::diag(1.0, delta * delta);
    for (int l = 1; l <= L; ++l) {
        const double th = kPi * l / L;
        const Mat2 Q{std::cos(th), std::sin(th), -std::sin(th), std::cos(th)};
        lambdas.push_back(Q.transpose() * D * Q);
    }
    return bgn(std::move(lambdas));
}

AnisotropyModel AnisotropyModel::elliptic(double delta) {
    if (!(delta > 0.0)) throw ConfigError("elliptic: delta must be > 0");
    return bgn({Mat2::diag(1.0, delta * delta)});
}

std::string AnisotropyModel::description() const {
    switch (kind_) {
        case DensityKind::Isotropic: return "isotropic";
        case DensityKind::SmoothKFold:
            return "kfold(k=" + std::to_string(k_) + ",delta=" + std::to_string(delta_) + ")";
        case DensityKind::Bgn: return "bgn(L=" + std::to_string(lambdas_.size()) + ")";
        case DensityKind::MetricInduced: return "metric(" + field_->name() + ")";
    }
    return "?";
}

bool AnisotropyModel::admissible(const Vec2& z) const {
    return kind_ != DensityKind::MetricInduced || field_->admissible(z);
}

double AnisotropyModel::value(const Vec2& z, const Vec2& p) const {
    switch (kind_) {
        case DensityKind::Isotropic: return p.norm();
        case DensityKind::SmoothKFold: {
            const double r = p.norm();
            if (r == 0.0) return 0.0;
            return r * (1.0 + delta_ * std::cos(k_ * std::atan2(p.y, p.x)));
        }
        case DensityKind::Bgn: {
            double s = 0.0;
            for (const Mat2& L : lambdas_) s += std::sqrt(L.quad(p, p));
            return s;
        }
        case DensityKind::MetricInduced: {
            if (!field_->admissible(z))
                throw DomainError("density: point outside the metric domain");
            return std::sqrt(field_->metric(z).inverse().quad(p, p));
        }
    }
    return 0.0;
}

DensityJet AnisotropyModel::jet(const Vec2& z, const Vec2& p) const {
    require_nonzero(p, "density_jet");
    DensityJet out;
    switch (kind_) {
        case DensityKind::Isotropic: {
            const double r = p.norm();
            const Vec2 ph = p / r;
            out.value = r;
            out.grad_p = ph;
            out.hess_p = (Mat2::identity() - Mat2::outer(ph, ph)) * (1.0 / r);
            break;
        }
        case DensityKind::SmoothKFold: {
            const double r = p.norm();
            const double th = std::atan2(p.y, p.x);
            const double g = 1.0 + delta_ * std::cos(k_ * th);
            const double gd = -k_ * delta_ * std::sin(k_ * th);
            const double gdd = -k_ * k_ * delta_ * std::cos(k_ * th);
            const Vec2 ph = p / r;
            const Vec2 pperp = ph.perp();
            out.value = r * g;
            out.grad_p = ph * g + pperp * gd;
            out.hess_p = Mat2::outer(pperp, pperp) * ((g + gdd) / r);
            break;
        }
        case DensityKind::Bgn: {
            for (const Mat2& L : lambdas_) {
                const Vec2 Lp = L * p;
                const double s = std::sqrt(dot(Lp, p));
                out.value += s;
                out.grad_p += Lp / s;
                out.hess_p += L * (1.0 / s) - Mat2::outer(Lp, Lp) * (1.0 / (s * s * s));
            }
            break;
        }
        case DensityKind::MetricInduced: {
            if (!field_->admissible(z))
                throw DomainError("density_jet: point outside the metric domain");
            const Mat2 Gi = field_->metric(z).inverse();
            const auto Gz = field_->metric_grad(z);
            const Vec2 u = Gi * p;
            const double g = std::sqrt(dot(u, p));
            out.value = g;
            out.grad_p = u / g;
            out.hess_p = Gi * (1.0 / g) - Mat2::outer(u, u) * (1.0 / (g * g * g));
            for (int j = 0; j < 2; ++j) {
                const Mat2 Gij = (Gi * Gz[j] * Gi) * -1.0;  // (G^{-1})_{z_j}
                const Vec2 Gijp = Gij * p;
                const double q = dot(Gijp, p);
                out.grad_z = j == 0 ? Vec2{q / (2.0 * g), out.grad_z.y}
                                    : Vec2{out.grad_z.x, q / (2.0 * g)};
                const Vec2 col = Gijp / g - u * (q / (2.0 * g * g * g));
                out.mixed_pz.at(0, j) = col.x;
                out.mixed_pz.at(1, j) = col.y;
            }
            break;
        }
    }
    return out;
}

double AnisotropyModel::weight(const Vec2& z) const {
    if (kind_ != DensityKind::MetricInduced) return 1.0;
    if (!field_->admissible(z)) throw DomainError("weight: point outside the metric domain");
    return std::sqrt(field_->metric(z).det());
}

Vec2 AnisotropyModel::weight_grad(const Vec2& z) const {
    if (kind_ != DensityKind::MetricInduced) return {};
    const double a = weight(z);
    const Mat2 Gi = field_->metric(z).inverse();
    const auto Gz = field_->metric_grad(z);
    return {0.5 * (Gi * Gz[0]).trace() * a, 0.5 * (Gi * Gz[1]).trace() * a};
}

DensityJet density_jet(const AnisotropyModel& model, const Vec2& z, const Vec2& p) {
    return model.jet(z, p);
}

double phi_value(const AnisotropyModel& model, const Vec2& z, const Vec2& p) {
    const double a = model.weight(z);
    const double g = model.value(z, p.perp());
    return 0.5 * a * a * g * g;
}

PhiJet phi_jet(const AnisotropyModel& model, const Vec2& z, const Vec2& p) {
    require_nonzero(p, "phi_jet");
    const Vec2 q = p.perp();
    const DensityJet d = model.jet(z, q);
    const double a = model.weight(z);
    const Vec2 az = model.weight_grad(z);
    const double a2 = a * a;

    PhiJet out;
    out.value = 0.5 * a2 * d.value * d.value;
    out.grad_p = -(a2 * d.value) * d.grad_p.perp();
    out.grad_z = az * (a * d.value * d.value) + d.grad_z * (a2 * d.value);
    out.hess_p = rotate_form((Mat2::outer(d.grad_p, d.grad_p) + d.hess_p * d.value) * a2);
    for (int j = 0; j < 2; ++j) {
        const double azj = j == 0 ? az.x : az.y;
        const double gzj = j == 0 ? d.grad_z.x : d.grad_z.y;
        const Vec2 gpzj{d.mixed_pz(0, j), d.mixed_pz(1, j)};
        const Vec2 col =
            d.grad_p * (2.0 * a * azj * d.value + a2 * gzj) + gpzj * (a2 * d.value);
        const Vec2 rotated = -col.perp();
        out.mixed_pz.at(0, j) = rotated.x;
        out.mixed_pz.at(1, j) = rotated.y;
    }
    return out;
}

Mat2 h_matrix(const AnisotropyModel& model, const Vec2& z, const Vec2& p) {
    require_nonzero(p, "h_matrix");
    const Vec2 q = p.perp();
    const DensityJet d = model.jet(z, q);
    const double a = model.weight(z);
    const double denom = d.grad_p.norm2();
    const double pref = a * a * d.value / denom;
    const double off = dot(d.grad_p, p);
    return {pref * d.value, pref * off, -pref * off, pref * d.value};
}

Mat2 h_matrix_riemannian(const metric::MetricField& field, const Vec2& z, const Vec2& p) {
    require_nonzero(p, "h_matrix_riemannian");
    if (!field.admissible(z))
        throw DomainError("h_matrix_riemannian: point outside the metric domain");
    const Mat2 G = field.metric(z);
    const Vec2 Gp = G * p;
    const double gpp = dot(Gp, p);
    const double gpperp = dot(Gp, p.perp());
    const double pref = G.det() * gpp / Gp.norm2();
    return {pref * gpp, -pref * gpperp, pref * gpperp, pref * gpp};
}

Mat2 b_matrix(const AnisotropyModel& model, const Vec2& p) {
    if (model.kind() != DensityKind::Bgn)
        throw ConfigError("b_matrix: model is not of Bgn type");
    const auto& tildes = model.bgn_tildes();
    if (p.x == 0.0 && p.y == 0.0) {
        Mat2 sum;
        for (const Mat2& T : tildes) sum += T;
        return sum * static_cast<double>(tildes.size());
    }
    // gamma0(p_perp) = sum_l sqrt(T_l p . p)
    double phi0 = 0.0;
    std::vector<double> roots(tildes.size());
    for (std::size_t l = 0; l < tildes.size(); ++l) {
        roots[l] = std::sqrt(tildes[l].quad(p, p));
        phi0 += roots[l];
    }
    Mat2 B;
    for (std::size_t l = 0; l < tildes.size(); ++l) B += tildes[l] * (phi0 / roots[l]);
    return B;
}

namespace {

void require_space_independent(const AnisotropyModel& model, const char* where) {
    if (!model.space_independent())
        throw DomainError(std::string(where) + ": needs a space-independent model");
}

double dual_objective(const AnisotropyModel& model, const Vec2& q, double theta) {
    const Vec2 p{std::cos(theta), std::sin(theta)};
    return dot(p, q) / model.value({}, p);
}

}  // namespace

double dual_value(const AnisotropyModel& model, const Vec2& q) {
    require_space_independent(model, "dual_value");
    if (q.x == 0.0 && q.y == 0.0) return 0.0;
    constexpr int kGrid = 2048;
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < kGrid; ++i) {
        const double f = dual_objective(model, q, 2.0 * kPi * i / kGrid);
        if (f > best) {
            best = f;
            best_i = i;
        }
    }
    // Golden-section refinement around the best grid cell.
    double lo = 2.0 * kPi * (best_i - 1) / kGrid;
    double hi = 2.0 * kPi * (best_i + 1) / kGrid;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = dual_objective(model, q, x1);
    double f2 = dual_objective(model, q, x2);
    for (int it = 0; it < 90 && hi - lo > 1e-14; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = dual_objective(model, q, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = dual_objective(model, q, x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

std::vector<Vec2> sample_wulff(const AnisotropyModel& model, int n) {
    require_space_independent(model, "sample_wulff");
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * kPi * i / n;
        const Vec2 q{std::cos(th), std::sin(th)};
        pts[i] = q / dual_value(model, q);
    }
    return pts;
}

std::vector<Vec2> sample_frank(const AnisotropyModel& model, int n) {
    require_space_independent(model, "sample_frank");
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * kPi * i / n;
        const Vec2 p{std::cos(th), std::sin(th)};
        pts[i] = p / model.value({}, p);
    }
    return pts;
}

ConvexityReport assert_convex(const AnisotropyModel& model) {
    if (model.kind() == DensityKind::SmoothKFold) {
        const int k = model.kfold_k();
        const double delta = model.kfold_delta();
        ConvexityReport rep;
        rep.min_form = 1.0 - delta * (k * k - 1);
        rep.convex = delta < 1.0 / (k * k - 1);
        rep.witness = {1.0, 0.0};  // cos(k theta) = 1 attains the minimum
        return rep;
    }
    const Vec2 z = model.space_independent() ? Vec2{} : model.field()->sample_point();
    constexpr int kDirections = 1440;
    ConvexityReport rep;
    rep.min_form = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kDirections; ++i) {
        const double th = 2.0 * kPi * i / kDirections;
        const Vec2 p{std::cos(th), std::sin(th)};
        const Vec2 q = p.perp();
        const double form = model.jet(z, p).hess_p.quad(q, q);
        if (form < rep.min_form) {
            rep.min_form = form;
            rep.witness = p;
        }
    }
    rep.convex = rep.min_form > 0.0;
    return rep;
}

std::vector<double> anisotropic_curvature(const AnisotropyModel& model,
                                          const geom::DiscreteCurve& curve) {
    const int J = curve.size();
    std::vector<double> kg(J);
    for (int j = 0; j < J; ++j) {
        const Vec2& z = curve.positions[j];
        if (!model.admissible(z))
            throw DomainError("anisotropic_curvature: node " + std::to_string(j) +
                              " outside the admissible domain");
        const geom::NodeGeometry ng = geom::node_geometry(curve, j);
        const DensityJet d = model.jet(z, ng.normal);
        const double a = model.weight(z);
        const Vec2 az = model.weight_grad(z);
        kg[j] = ng.curvature * d.hess_p.quad(ng.tangent, ng.tangent) -
                (d.mixed_pz(0, 0) + d.mixed_pz(1, 1)) - dot(az, d.grad_p) / a;
    }
    return kg;
}

}  // namespace acsf::aniso
