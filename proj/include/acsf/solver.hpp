#pragma once

#include <functional>
#include <vector>

#include "acsf/vec2.hpp"

namespace acsf::solver {

/// Periodic block tridiagonal matrix with 2x2 blocks: row j couples the
/// unknown blocks x_{j-1}, x_j, x_{j+1} (indices mod n) through lower[j],
/// diag[j], upper[j]. This is the stiffness/mass structure of the implicit
/// steps on the periodic mesh.
struct CyclicBlockTridiagonal {
    int n = 0;
    std::vector<Mat2> lower;
    std::vector<Mat2> diag;
    std::vector<Mat2> upper;

    explicit CyclicBlockTridiagonal(int size)
        : n(size), lower(size), diag(size), upper(size) {}

    std::vector<Vec2> apply(const std::vector<Vec2>& x) const;
};

/// Direct solve by block elimination with a bordered last block for the
/// wraparound coupling. Throws SingularSystemError on a singular pivot.
std::vector<Vec2> cyclic_solve(const CyclicBlockTridiagonal& A, const std::vector<Vec2>& rhs);

struct NewtonSettings {
    /// Convergence when ||r||_inf <= tolerance * (1 + ||r(x0)||_inf); the
    /// scaling keeps the threshold reachable in double precision when the
    /// assembled residual carries large metric coefficients.
    double tolerance = 1e-10;
    int max_iterations = 20;
    int max_halvings = 8;  // damping factors 1, 1/2, ..., 2^-8
};

struct NewtonResult {
    std::vector<Vec2> x;
    int iterations = 0;
    double residual_norm = 0.0;
};

using ResidualFn = std::function<std::vector<Vec2>(const std::vector<Vec2>&)>;
using JacobianFn = std::function<CyclicBlockTridiagonal(const std::vector<Vec2>&)>;

double max_norm(const std::vector<Vec2>& v);

/// Damped Newton iteration: full steps while the residual decreases, halving
/// the step otherwise. A residual evaluation that throws DomainError is
/// treated like an increase, so trial iterates outside the admissible domain
/// only shorten the step. Throws NonconvergenceError when the tolerance is
/// not reached.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<Vec2> x0, const NewtonSettings& settings = {});

}  // namespace acsf::solver
