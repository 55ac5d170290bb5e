#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "acsf/errors.hpp"
#include "acsf/vec2.hpp"

namespace acsf::geom {

/// Uniform periodic decomposition of [0,1] into J intervals, q_j = j/J with
/// q_J identified with q_0. Node indices live in 0..J-1 and wrap modulo J.
class PeriodicMesh {
  public:
    explicit PeriodicMesh(int node_count);

    int size() const { return J_; }
    double h() const { return 1.0 / J_; }
    double node(int j) const { return static_cast<double>(j) / J_; }

    int next(int j) const { return j + 1 == J_ ? 0 : j + 1; }
    int prev(int j) const { return j == 0 ? J_ - 1 : j - 1; }

  private:
    int J_;
};

/// Closed piecewise linear curve: node j holds the position at q_j.
/// Element j is the interval [q_{j-1}, q_j], i.e. the chord prev(j) -> j.
struct DiscreteCurve {
    PeriodicMesh mesh;
    std::vector<Vec2> positions;
    double time = 0.0;

    DiscreteCurve(PeriodicMesh m, std::vector<Vec2> pos, double t = 0.0);

    int size() const { return mesh.size(); }
    /// Chord vector of element j (from node prev(j) to node j).
    Vec2 chord(int j) const { return positions[j] - positions[mesh.prev(j)]; }
};

/// Per-element constant values attached to the intervals I_j.
template <typename T>
struct ElementField {
    std::vector<T> values;

    int size() const { return static_cast<int>(values.size()); }
    const T& operator[](int j) const { return values[j]; }
    T& operator[](int j) { return values[j]; }
};

/// Piecewise-constant derivative of the piecewise linear interpolant:
/// x_rho on element j equals chord(j) / h.
ElementField<Vec2> element_derivative(const DiscreteCurve& curve);

double min_element_length(const DiscreteCurve& curve);
double max_element_length(const DiscreteCurve& curve);

/// Longest/shortest element length; throws DegenerateMeshError on a
/// zero-length element.
double ratio(const DiscreteCurve& curve);

/// One-sided nodal limits of a piecewise smooth function with possible jumps
/// at the nodes: minus[j] is the limit at q_j from element j (the left),
/// plus[j] the limit from element next(j) (the right). Continuous nodal data
/// has minus == plus.
template <typename T>
struct LumpedField {
    std::vector<T> minus;
    std::vector<T> plus;

    static LumpedField nodal(std::vector<T> v) { return {v, v}; }
    static LumpedField element(const ElementField<T>& e, const PeriodicMesh& mesh) {
        LumpedField f;
        f.minus = e.values;
        f.plus.resize(e.values.size());
        for (int j = 0; j < mesh.size(); ++j) f.plus[j] = e.values[mesh.next(j)];
        return f;
    }
};

/// Mass-lumped L2 inner product on the periodic interval:
///   (u,v)^h = 1/2 sum_j h_j [ (uv)(q_j-) + (uv)(q_{j-1}+) ].
double lumped_inner(const LumpedField<double>& u, const LumpedField<double>& v,
                    const PeriodicMesh& mesh);
double lumped_inner(const LumpedField<Vec2>& u, const LumpedField<Vec2>& v,
                    const PeriodicMesh& mesh);

/// Nodal weights of (w, chi_j)^h for one-sided data w: returns
/// h/2 * (w.minus[j] + w.plus[j]); the only place nodal jumps enter the
/// lumped quadrature.
inline double lumped_node_value(const LumpedField<double>& w, int j, double h) {
    return 0.5 * h * (w.minus[j] + w.plus[j]);
}

/// Discrete unit tangent, unit normal (nu = tau rotated by +pi/2) and
/// curvature at a node, from centered second differences of the nodal
/// positions. Second order accurate on smoothly sampled curves.
struct NodeGeometry {
    Vec2 tangent;
    Vec2 normal;
    double curvature = 0.0;
};

NodeGeometry node_geometry(const DiscreteCurve& curve, int j);

/// Smooth parameterization of a closed curve, used as the reference in error
/// norms. position/derivative take the periodic parameter rho in [0,1).
struct ParametricCurve {
    std::function<Vec2(double)> position;
    std::function<Vec2(double)> derivative;
};

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;  // full H1 norm, sqrt(l2^2 + seminorm^2)
};

/// L2 and H1 distance between the exact map and the piecewise linear curve,
/// by 3-point Gauss quadrature on every element.
ErrorNorms error_norms(const DiscreteCurve& curve, const ParametricCurve& exact);

/// Nodal interpolant of a parameterized curve at the mesh nodes.
DiscreteCurve interpolate(const ParametricCurve& curve, int J, double time = 0.0);

/// Equidistributed (uniform angle) polygonal approximation of a circle.
DiscreteCurve make_circle(int J, Vec2 center = {0.0, 0.0}, double radius = 1.0);

/// Resample a dense closed polyline into J nodes equidistributed by arclength.
DiscreteCurve equidistribute(const std::vector<Vec2>& dense, int J, double time = 0.0);

}  // namespace acsf::geom
