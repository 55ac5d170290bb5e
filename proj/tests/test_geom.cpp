#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "acsf/exact.hpp"
#include "acsf/geom.hpp"

using namespace acsf;
using geom::DiscreteCurve;
using geom::PeriodicMesh;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent direct evaluation of the mass-lumped product
//   (u,v)^h = 1/2 sum_j h [ (uv)(q_j^-) + (uv)(q_{j-1}^+) ]
// from one-sided samples, written without reusing the library loop.
double brute_ip0(const std::vector<double>& u_minus, const std::vector<double>& u_plus,
                 const std::vector<double>& v_minus, const std::vector<double>& v_plus,
                 int J) {
    double total = 0.0;
    for (int j = 0; j < J; ++j) {
        const int jm = (j + J - 1) % J;
        // element j: right end q_j from inside, left end q_{j-1} from inside
        total += 0.5 * (1.0 / J) * (u_minus[j] * v_minus[j] + u_plus[jm] * v_plus[jm]);
    }
    return total;
}

}  // namespace

TEST_CASE("periodic mesh basics") {
    CHECK_THROWS_AS(PeriodicMesh(2), ConfigError);
    PeriodicMesh mesh(8);
    CHECK(mesh.h() == doctest::Approx(0.125));
    CHECK(mesh.next(7) == 0);
    CHECK(mesh.prev(0) == 7);
    double total = 0.0;
    for (int j = 0; j < 8; ++j) total += mesh.h();
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("element derivative of the 4-node diamond") {
    DiscreteCurve c(PeriodicMesh(4), {{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    const auto d = geom::element_derivative(c);
    for (int j = 0; j < 4; ++j)
        CHECK(d[j].norm() == doctest::Approx(4.0 * std::sqrt(2.0)));
}

TEST_CASE("element derivative lengths on a sampled circle") {
    for (int J : {8, 32, 100}) {
        const DiscreteCurve c = geom::make_circle(J);
        const auto d = geom::element_derivative(c);
        const double expected = 2.0 * J * std::sin(kPi / J);
        for (int j = 0; j < J; ++j) CHECK(d[j].norm() == doctest::Approx(expected));
    }
}

TEST_CASE("affinely mapped polygons keep the chord structure") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, t{u(rng), u(rng)};
    std::vector<Vec2> base = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<Vec2> pos;
    for (const Vec2& p : base) pos.push_back({dot(a, p) + t.x, dot(b, p) + t.y});
    DiscreteCurve c(PeriodicMesh(4), pos);
    const auto d = geom::element_derivative(c);
    // opposite chords of the mapped diamond are anti-parallel
    CHECK(max_abs(d[0] + d[2]) < 1e-12);
    CHECK(max_abs(d[1] + d[3]) < 1e-12);
}

TEST_CASE("degenerate curve is flagged") {
    DiscreteCurve c(PeriodicMesh(4), std::vector<Vec2>(4, Vec2{1.0, 2.0}));
    CHECK(geom::min_element_length(c) == 0.0);
    CHECK_THROWS_AS(geom::ratio(c), DegenerateMeshError);
}

TEST_CASE("lumped inner product of constants is one") {
    for (int J : {3, 7, 64}) {
        PeriodicMesh mesh(J);
        auto ones = geom::LumpedField<double>::nodal(std::vector<double>(J, 1.0));
        CHECK(geom::lumped_inner(ones, ones, mesh) == doctest::Approx(1.0));
    }
}

TEST_CASE("lumped inner product of a hat function with itself is h") {
    const int J = 16;
    PeriodicMesh mesh(J);
    std::vector<double> hat(J, 0.0);
    hat[5] = 1.0;
    auto f = geom::LumpedField<double>::nodal(hat);
    CHECK(geom::lumped_inner(f, f, mesh) == doctest::Approx(1.0 / J));
}

TEST_CASE("lumped inner product matches the direct one-sided sum") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int J : {4, 9, 33}) {
        PeriodicMesh mesh(J);
        // nodal-linear u, element-constant v with jumps at every node
        std::vector<double> nodal(J);
        geom::ElementField<double> elem;
        elem.values.resize(J);
        for (int j = 0; j < J; ++j) {
            nodal[j] = u(rng);
            elem.values[j] = u(rng);
        }
        auto fu = geom::LumpedField<double>::nodal(nodal);
        auto fv = geom::LumpedField<double>::element(elem, mesh);
        const double lib = geom::lumped_inner(fu, fv, mesh);
        const double brute = brute_ip0(fu.minus, fu.plus, fv.minus, fv.plus, J);
        CHECK(lib == doctest::Approx(brute).epsilon(1e-14));
    }
}

TEST_CASE("lumped inner product is symmetric, bilinear and positive") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int J = 12;
    PeriodicMesh mesh(J);
    auto rnd = [&] {
        geom::LumpedField<double> f;
        for (int j = 0; j < J; ++j) {
            f.minus.push_back(u(rng));
            f.plus.push_back(u(rng));
        }
        return f;
    };
    const auto a = rnd(), b = rnd(), c = rnd();
    CHECK(geom::lumped_inner(a, b, mesh) == doctest::Approx(geom::lumped_inner(b, a, mesh)));
    geom::LumpedField<double> apb;
    for (int j = 0; j < J; ++j) {
        apb.minus.push_back(a.minus[j] + 2.0 * b.minus[j]);
        apb.plus.push_back(a.plus[j] + 2.0 * b.plus[j]);
    }
    CHECK(geom::lumped_inner(apb, c, mesh) ==
          doctest::Approx(geom::lumped_inner(a, c, mesh) +
                          2.0 * geom::lumped_inner(b, c, mesh)));
    CHECK(geom::lumped_inner(a, a, mesh) >= 0.0);
}

TEST_CASE("element-constant lumped product equals the exact integral") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int J = 10;
    PeriodicMesh mesh(J);
    geom::ElementField<double> eu, ev;
    eu.values.resize(J);
    ev.values.resize(J);
    double exact = 0.0;
    for (int j = 0; j < J; ++j) {
        eu.values[j] = u(rng);
        ev.values[j] = u(rng);
        exact += mesh.h() * eu.values[j] * ev.values[j];
    }
    const double lumped =
        geom::lumped_inner(geom::LumpedField<double>::element(eu, mesh),
                           geom::LumpedField<double>::element(ev, mesh), mesh);
    CHECK(lumped == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("ratio of an equilateral polygon is one") {
    CHECK(geom::ratio(geom::make_circle(17)) == doctest::Approx(1.0));
}

TEST_CASE("ratio picks out the element length spread") {
    // rectangle with chord lengths 2,1,2,1
    DiscreteCurve c(PeriodicMesh(4), {{0, 0}, {2, 0}, {2, 1}, {0, 1}});
    CHECK(geom::ratio(c) == doctest::Approx(2.0));
}

TEST_CASE("ratio of the ellipse parameter sampling matches a direct scan") {
    const auto exact = harness::ExactSolution::wulff_ellipse(0.5);
    const DiscreteCurve c = exact.interpolate(128, 0.0);
    double lo = 1e300, hi = 0.0;
    for (int j = 0; j < 128; ++j) {
        const double len = c.chord(j).norm();
        lo = std::min(lo, len);
        hi = std::max(hi, len);
    }
    CHECK(geom::ratio(c) == doctest::Approx(hi / lo).epsilon(1e-14));
}

TEST_CASE("error norms vanish when the exact curve is the interpolant itself") {
    const int J = 12;
    const DiscreteCurve c = geom::make_circle(J);
    geom::ParametricCurve exact;
    auto locate = [J](double rho) {
        // element index e (1-based interval ending at node e), local coord t
        double s = rho * J;
        int e = static_cast<int>(std::floor(s)) + 1;  // interval (q_{e-1}, q_e]
        if (e > J) e = J;
        return std::pair<int, double>{e % J, s - (e - 1)};
    };
    exact.position = [&, locate](double rho) {
        const auto [e, t] = locate(rho);
        const Vec2 a = c.positions[(e + J - 1) % J];
        return a + (c.positions[e] - a) * t;
    };
    exact.derivative = [&, locate](double rho) {
        const auto [e, t] = locate(rho);
        (void)t;
        return (c.positions[e] - c.positions[(e + J - 1) % J]) * static_cast<double>(J);
    };
    const auto en = geom::error_norms(c, exact);
    CHECK(en.l2 < 1e-14);
    CHECK(en.h1 < 1e-13);
}

TEST_CASE("interpolation error of the shrinking ellipse converges at the expected orders") {
    const auto exact = harness::ExactSolution::wulff_ellipse(0.5);
    double prev_l2 = 0.0, prev_h1 = 0.0;
    for (int J : {32, 64, 128}) {
        const DiscreteCurve c = exact.interpolate(J, 0.0);
        const auto en = geom::error_norms(c, exact.at_time(0.0));
        if (prev_l2 > 0.0) {
            CHECK(prev_l2 / en.l2 == doctest::Approx(4.0).epsilon(0.05));
            CHECK(prev_h1 / en.h1 == doctest::Approx(2.0).epsilon(0.05));
        }
        prev_l2 = en.l2;
        prev_h1 = en.h1;
    }
}

TEST_CASE("error norms agree with a refined composite quadrature oracle") {
    const auto exact = harness::ExactSolution::wulff_ellipse(0.5);
    const int J = 16;
    const DiscreteCurve c = exact.interpolate(J, 0.0);
    const auto en = geom::error_norms(c, exact.at_time(0.0));

    // brute force: 200 midpoint panels per element
    double l2sq = 0.0, semisq = 0.0;
    const int panels = 200;
    for (int j = 0; j < J; ++j) {
        const Vec2 a = c.positions[(j + J - 1) % J];
        const Vec2 b = c.positions[j];
        const Vec2 d = (b - a) * static_cast<double>(J);
        const double left = static_cast<double>(j - 1) / J;
        for (int k = 0; k < panels; ++k) {
            const double xi = (k + 0.5) / panels;
            double rho = left + xi / J;
            if (rho < 0) rho += 1.0;
            const Vec2 xh = a + (b - a) * xi;
            l2sq += (exact.position(rho, 0.0) - xh).norm2() / (J * panels);
            semisq += (exact.d_rho(rho, 0.0) - d).norm2() / (J * panels);
        }
    }
    CHECK(en.l2 == doctest::Approx(std::sqrt(l2sq)).epsilon(1e-4));
    CHECK(en.h1 == doctest::Approx(std::sqrt(l2sq + semisq)).epsilon(1e-4));
}

TEST_CASE("node geometry recovers circle curvature at second order") {
    double prev = 0.0;
    for (int J : {16, 32, 64}) {
        const DiscreteCurve c = geom::make_circle(J, {0.4, -0.7}, 0.8);
        double worst = 0.0;
        for (int j = 0; j < J; ++j)
            worst = std::max(worst,
                             std::abs(geom::node_geometry(c, j).curvature - 1.0 / 0.8));
        if (prev > 0.0) CHECK(prev / worst > 3.6);
        prev = worst;
    }
}

TEST_CASE("equidistribute produces equal chords") {
    std::vector<Vec2> dense;
    for (int i = 0; i < 4000; ++i) {
        const double th = 2.0 * kPi * i / 4000;
        dense.push_back({2.0 * std::cos(th), std::sin(th)});
    }
    const DiscreteCurve c = geom::equidistribute(dense, 32);
    CHECK(geom::ratio(c) < 1.02);
}
