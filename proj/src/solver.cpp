#include "acsf/solver.hpp"

#include <algorithm>
#include <cmath>

#include "acsf/errors.hpp"

namespace acsf::solver {

std::vector<Vec2> CyclicBlockTridiagonal::apply(const std::vector<Vec2>& x) const {
    std::vector<Vec2> y(n);
    for (int j = 0; j < n; ++j) {
        const int jm = j == 0 ? n - 1 : j - 1;
        const int jp = j + 1 == n ? 0 : j + 1;
        y[j] = lower[j] * x[jm] + diag[j] * x[j] + upper[j] * x[jp];
    }
    return y;
}

namespace {

// Solves M [u v] = [a b] for two right hand sides with the same 2x2 pivot,
// using the explicit inverse; rejects numerically singular pivots.
struct Pivot {
    Mat2 inv;

    explicit Pivot(const Mat2& m) {
        const double d = m.det();
        const double scale = m.max_abs();
        if (!(std::abs(d) > 1e-14 * scale * scale) || !std::isfinite(d))
            throw SingularSystemError("cyclic_solve: singular pivot block");
        inv = m.inverse();
    }
};

}  // namespace

std::vector<Vec2> cyclic_solve(const CyclicBlockTridiagonal& A, const std::vector<Vec2>& rhs) {
    const int n = A.n;
    if (n < 3) throw ConfigError("cyclic_solve: need at least 3 blocks");
    if (static_cast<int>(rhs.size()) != n)
        throw ConfigError("cyclic_solve: rhs size does not match");

    // Eliminate the chain x_0 .. x_{n-2}; the last block x_b = x_{n-1} is the
    // border. Row j of the chain reads
    //   L_j x_{j-1} + D_j x_j + U_j x_{j+1} + C_j x_b = b_j,
    // with C_0 = lower[0], C_{n-2} = upper[n-2], and C_j = 0 otherwise.
    const int m = n - 1;
    std::vector<Mat2> su(m);  // eliminated superdiagonal
    std::vector<Mat2> sc(m);  // eliminated border column
    std::vector<Vec2> sb(m);  // eliminated rhs

    for (int j = 0; j < m; ++j) {
        Mat2 D = A.diag[j];
        Mat2 C = j == 0 ? A.lower[0] : Mat2{};
        Mat2 U = j == m - 1 ? Mat2{} : A.upper[j];
        if (j == m - 1) C += A.upper[j];
        Vec2 b = rhs[j];
        if (j > 0) {
            const Mat2& L = A.lower[j];
            D -= L * su[j - 1];
            C -= L * sc[j - 1];
            b -= L * sb[j - 1];
        }
        const Pivot piv(D);
        su[j] = piv.inv * U;
        sc[j] = piv.inv * C;
        sb[j] = piv.inv * b;
    }

    // Back substitution in the form x_j = y_j - Z_j x_b:
    //   x_j = sb_j - su_j x_{j+1} - sc_j x_b
    //   =>  y_j = sb_j - su_j y_{j+1},  Z_j = sc_j - su_j Z_{j+1}.
    std::vector<Vec2> y(m);
    std::vector<Mat2> Z(m);
    y[m - 1] = sb[m - 1];
    Z[m - 1] = sc[m - 1];
    for (int j = m - 2; j >= 0; --j) {
        y[j] = sb[j] - su[j] * y[j + 1];
        Z[j] = sc[j] - su[j] * Z[j + 1];
    }

    // Border row: lower[n-1] x_{n-2} + diag[n-1] x_b + upper[n-1] x_0 = b.
    const Mat2 S = A.diag[n - 1] - A.lower[n - 1] * Z[m - 1] - A.upper[n - 1] * Z[0];
    const Vec2 r = rhs[n - 1] - A.lower[n - 1] * y[m - 1] - A.upper[n - 1] * y[0];
    const Pivot piv(S);
    const Vec2 xb = piv.inv * r;

    std::vector<Vec2> x(n);
    x[n - 1] = xb;
    for (int j = 0; j < m; ++j) x[j] = y[j] - Z[j] * xb;
    return x;
}

double max_norm(const std::vector<Vec2>& v) {
    double m = 0.0;
    for (const Vec2& e : v) m = std::max(m, max_abs(e));
    return m;
}

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<Vec2> x0, const NewtonSettings& settings) {
    if (settings.tolerance <= 0.0 || settings.max_iterations < 1)
        throw ConfigError("newton_solve: invalid settings");

    std::vector<Vec2> x = std::move(x0);
    std::vector<Vec2> r = residual(x);
    double rnorm = max_norm(r);
    const double threshold = settings.tolerance * (1.0 + rnorm);

    for (int it = 0; it < settings.max_iterations; ++it) {
        if (rnorm <= threshold) return {std::move(x), it, rnorm};

        const CyclicBlockTridiagonal J = jacobian(x);
        std::vector<Vec2> neg(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
        const std::vector<Vec2> d = cyclic_solve(J, neg);

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= settings.max_halvings; ++halving) {
            std::vector<Vec2> xt(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] + d[i] * lambda;
            try {
                std::vector<Vec2> rt = residual(xt);
                const double rtnorm = max_norm(rt);
                if (rtnorm < rnorm || rtnorm <= threshold) {
                    x = std::move(xt);
                    r = std::move(rt);
                    rnorm = rtnorm;
                    accepted = true;
                    break;
                }
            } catch (const DomainError&) {
                // trial iterate left the admissible domain; shorten the step
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw NonconvergenceError("newton_solve: no damping factor reduced the residual",
                                      rnorm);
    }
    if (rnorm <= threshold) return {std::move(x), settings.max_iterations, rnorm};
    throw NonconvergenceError("newton_solve: max iterations exceeded", rnorm);
}

}  // namespace acsf::solver
