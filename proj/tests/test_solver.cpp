#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "acsf/anisotropy.hpp"
#include "acsf/geom.hpp"
#include "acsf/schemes.hpp"
#include "acsf/solver.hpp"

using namespace acsf;
using solver::CyclicBlockTridiagonal;

namespace {

// Dense Gaussian elimination with partial pivoting; the brute-force oracle
// for the structured solver.
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

std::vector<Vec2> dense_oracle(const CyclicBlockTridiagonal& A, const std::vector<Vec2>& rhs) {
    const int n = A.n;
    std::vector<std::vector<double>> M(2 * n, std::vector<double>(2 * n, 0.0));
    auto put = [&](int row, int col, const Mat2& blk) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) M[2 * row + i][2 * col + j] += blk(i, j);
    };
    for (int j = 0; j < n; ++j) {
        put(j, (j + n - 1) % n, A.lower[j]);
        put(j, j, A.diag[j]);
        put(j, (j + 1) % n, A.upper[j]);
    }
    std::vector<double> b(2 * n);
    for (int j = 0; j < n; ++j) {
        b[2 * j] = rhs[j].x;
        b[2 * j + 1] = rhs[j].y;
    }
    const std::vector<double> x = dense_solve(std::move(M), std::move(b));
    std::vector<Vec2> out(n);
    for (int j = 0; j < n; ++j) out[j] = {x[2 * j], x[2 * j + 1]};
    return out;
}

CyclicBlockTridiagonal random_dominant(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CyclicBlockTridiagonal A(n);
    for (int j = 0; j < n; ++j) {
        A.lower[j] = {u(rng), u(rng), u(rng), u(rng)};
        A.upper[j] = {u(rng), u(rng), u(rng), u(rng)};
        A.diag[j] = Mat2{u(rng), u(rng), u(rng), u(rng)} + Mat2::identity() * 6.0;
    }
    return A;
}

}  // namespace

TEST_CASE("identity blocks return the right hand side") {
    const int n = 5;
    CyclicBlockTridiagonal A(n);
    for (int j = 0; j < n; ++j) A.diag[j] = Mat2::identity();
    std::vector<Vec2> rhs(n);
    for (int j = 0; j < n; ++j) rhs[j] = {1.0 * j, -2.0 * j};
    const auto x = solver::cyclic_solve(A, rhs);
    for (int j = 0; j < n; ++j) CHECK(max_abs(x[j] - rhs[j]) == 0.0);
}

TEST_CASE("structured solver matches the dense oracle on random systems") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {3, 4, 5, 8, 16, 32}) {
        for (int rep = 0; rep < 5; ++rep) {
            const CyclicBlockTridiagonal A = random_dominant(n, rng);
            std::vector<Vec2> rhs(n);
            for (int j = 0; j < n; ++j) rhs[j] = {u(rng), u(rng)};
            const auto x = solver::cyclic_solve(A, rhs);
            const auto y = dense_oracle(A, rhs);
            double scale = 0.0, err = 0.0;
            for (int j = 0; j < n; ++j) {
                scale = std::max(scale, max_abs(y[j]));
                err = std::max(err, max_abs(x[j] - y[j]));
            }
            CHECK(err <= 1e-10 * (1.0 + scale));
            // residual check
            const auto r = A.apply(x);
            double rnorm = 0.0, bnorm = 0.0;
            for (int j = 0; j < n; ++j) {
                rnorm = std::max(rnorm, max_abs(r[j] - rhs[j]));
                bnorm = std::max(bnorm, max_abs(rhs[j]));
            }
            CHECK(rnorm <= 1e-10 * (1.0 + bnorm));
        }
    }
}

TEST_CASE("assembled linear step matrix for the isotropic circle matches the dense oracle") {
    schemes::FlowConfig cfg;
    cfg.scheme = schemes::Scheme::FdBgn;
    cfg.model = aniso::AnisotropyModel::bgn({Mat2::identity()});
    cfg.dt = 1e-3;
    const auto c = geom::make_circle(16);
    const auto sys = schemes::assemble_step(c, cfg);
    const CyclicBlockTridiagonal A = sys.jacobian(c.positions);
    std::vector<Vec2> rhs = sys.residual(std::vector<Vec2>(16, Vec2{}));
    for (auto& r : rhs) r = -r;
    const auto x = solver::cyclic_solve(A, rhs);
    const auto y = dense_oracle(A, rhs);
    for (int j = 0; j < 16; ++j) CHECK(max_abs(x[j] - y[j]) < 1e-10);
}

TEST_CASE("singular pivot raises") {
    CyclicBlockTridiagonal A(4);  // all zero blocks
    std::vector<Vec2> rhs(4, Vec2{1.0, 1.0});
    CHECK_THROWS_AS(solver::cyclic_solve(A, rhs), SingularSystemError);
}

TEST_CASE("newton solves linear problems in one iteration") {
    std::mt19937 rng(43);
    const int n = 8;
    const CyclicBlockTridiagonal A = random_dominant(n, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec2> b(n);
    for (int j = 0; j < n; ++j) b[j] = {u(rng), u(rng)};
    auto residual = [&](const std::vector<Vec2>& x) {
        auto r = A.apply(x);
        for (int j = 0; j < n; ++j) r[j] -= b[j];
        return r;
    };
    auto jacobian = [&](const std::vector<Vec2>&) { return A; };
    const auto nr = solver::newton_solve(residual, jacobian, std::vector<Vec2>(n, Vec2{}));
    CHECK(nr.iterations == 1);
    CHECK(nr.residual_norm <= 1e-10 * (1.0 + solver::max_norm(b)));
}

TEST_CASE("newton converges quadratically on a componentwise cubic") {
    // residual F_i(x) = x_i^3 - c_i with known root c_i^{1/3}
    const int n = 4;
    std::vector<Vec2> c(n);
    for (int j = 0; j < n; ++j) c[j] = {1.0 + j, 2.0 + j};
    auto residual = [&](const std::vector<Vec2>& x) {
        std::vector<Vec2> r(n);
        for (int j = 0; j < n; ++j)
            r[j] = {x[j].x * x[j].x * x[j].x - c[j].x, x[j].y * x[j].y * x[j].y - c[j].y};
        return r;
    };
    auto jacobian = [&](const std::vector<Vec2>& x) {
        CyclicBlockTridiagonal A(n);
        for (int j = 0; j < n; ++j)
            A.diag[j] = Mat2::diag(3.0 * x[j].x * x[j].x, 3.0 * x[j].y * x[j].y);
        return A;
    };
    // watch the error sequence from a crude starting point
    std::vector<Vec2> x(n, Vec2{2.0, 2.0});
    std::vector<double> errs;
    for (int it = 0; it < 6; ++it) {
        double e = 0.0;
        for (int j = 0; j < n; ++j)
            e = std::max(e, std::abs(x[j].x - std::cbrt(c[j].x)));
        errs.push_back(e);
        auto r = residual(x);
        for (auto& v : r) v = -v;
        const auto d = solver::cyclic_solve(jacobian(x), r);
        for (int j = 0; j < n; ++j) x[j] += d[j];
    }
    // once in the quadratic regime the exponent doubles
    CHECK(errs[4] < 2.0 * errs[3] * errs[3] / std::max(errs[2], 1e-30));
    const auto nr = solver::newton_solve(residual, jacobian, std::vector<Vec2>(n, Vec2{2, 2}));
    CHECK(nr.residual_norm <= 1e-10 * (1.0 + 10.0));
}

TEST_CASE("newton reports nonconvergence for rootless residuals") {
    const int n = 3;
    auto residual = [&](const std::vector<Vec2>& x) {
        std::vector<Vec2> r(n);
        for (int j = 0; j < n; ++j)
            r[j] = {x[j].x * x[j].x + 1.0, x[j].y * x[j].y + 1.0};
        return r;
    };
    auto jacobian = [&](const std::vector<Vec2>& x) {
        CyclicBlockTridiagonal A(n);
        for (int j = 0; j < n; ++j)
            A.diag[j] = Mat2::diag(2.0 * x[j].x + 0.1, 2.0 * x[j].y + 0.1);
        return A;
    };
    CHECK_THROWS_AS(
        solver::newton_solve(residual, jacobian, std::vector<Vec2>(n, Vec2{1, 1})),
        NonconvergenceError);
}

TEST_CASE("newton iteration count on the threefold anisotropic step stays small") {
    const auto model = aniso::AnisotropyModel::smooth_kfold(3, 0.124);
    const auto c = geom::make_circle(128);
    const auto rep = schemes::step_fdani(c, model, 1e-4);
    CHECK(rep.newton_iterations <= 3);
}
