#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tangleroof/state.hpp"
#include "tangleroof/zero_finder.hpp"

namespace tangleroof {

// Bloch-ball coordinates of a state in the range of a rank-two mixture,
// taken with respect to the (psi1, psi2) basis: psi1 is the north pole and
// rho(p) sits at (0, 0, 2p - 1).
struct BlochPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Eigen::Vector3d vec() const { return {x, y, z}; }
    static BlochPoint from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
    double norm() const { return vec().norm(); }
    // Mixing weight on psi1 of the represented state.
    double weight() const { return 0.5 * (1.0 + z); }
};

// (2 Re z, 2 Im z, 1 - |z|^2) / (1 + |z|^2); the point at infinity is the south pole.
BlochPoint bloch_from_z(Complex z);
BlochPoint bloch_from_root(const ExtendedRoot& root);
BlochPoint axis_point(double p);

// Coordinates of an operator restricted to span{psi1, psi2}.
BlochPoint bloch_from_density(const RankTwoMixture& basis, const Eigen::MatrixXcd& rho);
// Inverse of bloch_from_density on the mixture's range.
Eigen::MatrixXcd density_from_bloch(const RankTwoMixture& basis, const BlochPoint& point);
// Normalized pure state represented by a point on the sphere.
PureState pure_state_from_bloch(const RankTwoMixture& basis, const BlochPoint& point);

struct PolytopeVertex {
    BlochPoint point;
    double p0 = 0.0;
    double phase = 0.0;
    // Index into ZeroSet::roots / ZeroSet::states.
    std::size_t root_index = 0;
};

struct ZeroPolytope {
    std::vector<PolytopeVertex> vertices;
    // Affine rank of the vertex set at 1e-8.
    int dimension = 0;
    // 3-volume when dimension == 3, area when dimension == 2, else 0.
    double volume = 0.0;
    // Every vertex subset of size 1..3.
    std::vector<std::vector<std::size_t>> faces;

    std::vector<BlochPoint> points() const;
};

// A point of some face together with its barycentric weights.
struct FaceHit {
    std::vector<std::size_t> face;
    std::vector<double> weights;
    double p = 0.0;
};

struct AxisInterval {
    double p_low = 0.0;
    double p_high = 0.0;
    FaceHit low_witness;
    FaceHit high_witness;
};

// Throws Error(empty_polytope) for an empty zero set.
ZeroPolytope build_polytope(const ZeroSet& zeros);

// The set of p with (0, 0, 2p - 1) inside the polytope, or nullopt when the
// axis misses it.
std::optional<AxisInterval> axis_zero_interval(const ZeroPolytope& polytope);

// Convex weights reproducing `target` from 1..3 face vertices. Throws
// Error(infeasible) when the target is outside the face.
std::vector<double> barycentric_weights(const BlochPoint& target, std::span<const BlochPoint> face);

// True when `point` lies in the convex hull of the polytope vertices.
bool polytope_contains(const ZeroPolytope& polytope, const BlochPoint& point, double tol = 1e-9);

struct RayExtension {
    BlochPoint boundary;
    double lambda = 1.0;
};

// Extends the ray from `anchor` through `target` to the unit sphere so that
// target = lambda * boundary + (1 - lambda) * anchor with lambda in (0, 1].
// Anchors on the sphere (polytope vertices) are accepted; throws
// Error(ill_posed) when target == anchor or either point leaves the ball.
RayExtension ray_extend(const BlochPoint& anchor, const BlochPoint& target);

}  // namespace tangleroof
