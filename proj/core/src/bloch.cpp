#include "tangleroof/bloch.hpp"

#include <algorithm>
#include <cmath>

#include "tangleroof/error.hpp"

namespace tangleroof {

namespace {

constexpr double kRankTol = 1e-8;
constexpr double kHitTol = 1e-9;
constexpr double kDropWeight = 1e-12;

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double polygon_area(std::vector<Eigen::Vector2d> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    std::vector<Eigen::Vector2d> hull;
    for (int pass = 0; pass < 2; ++pass) {
        const std::size_t start = hull.size();
        for (const auto& p : pts) {
            while (hull.size() >= start + 2 && cross2(hull[hull.size() - 2], hull.back(), p) <= 0.0) hull.pop_back();
            hull.push_back(p);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
    }
    double area = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        area += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * std::abs(area);
}

// Clamps tiny negative weights, renormalizes, and drops vertices that carry
// no weight.
FaceHit make_hit(const std::vector<std::size_t>& face, const Eigen::VectorXd& w,
                 const std::vector<BlochPoint>& pts) {
    FaceHit hit;
    double total = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) total += std::max(0.0, w[i]);
    double z = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double wi = std::max(0.0, w[i]) / total;
        if (wi <= kDropWeight) continue;
        hit.face.push_back(face[static_cast<std::size_t>(i)]);
        hit.weights.push_back(wi);
        z += wi * pts[face[static_cast<std::size_t>(i)]].z;
    }
    hit.p = 0.5 * (1.0 + z);
    return hit;
}

// Prefer fewer vertices, then lexicographically smaller faces.
bool simpler(const FaceHit& a, const FaceHit& b) {
    if (a.face.size() != b.face.size()) return a.face.size() < b.face.size();
    return a.face < b.face;
}

std::vector<FaceHit> general_hits(const ZeroPolytope& poly) {
    const auto pts = poly.points();
    std::vector<FaceHit> hits;
    for (const auto& face : poly.faces) {
        const auto k = static_cast<Eigen::Index>(face.size());
        // Rows: x, y and the weight sum; the axis condition is x = y = 0.
        Eigen::MatrixXd m(3, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& v = pts[face[static_cast<std::size_t>(j)]];
            m(0, j) = v.x;
            m(1, j) = v.y;
            m(2, j) = 1.0;
        }
        const Eigen::Vector3d rhs(0.0, 0.0, 1.0);
        Eigen::VectorXd w;
        if (k == 3) {
            if (std::abs(m.determinant()) <= 1e-12) continue;
            w = m.partialPivLu().solve(rhs);
        } else {
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
            if (qr.rank() < k) continue;
            w = qr.solve(rhs);
            if ((m * w - rhs).norm() > kHitTol) continue;
        }
        if (w.minCoeff() < -kHitTol) continue;
        hits.push_back(make_hit(face, w, pts));
    }
    return hits;
}

// All vertices lie in a plane that contains the z axis: clip the axis
// against the polygon inside that plane.
std::vector<FaceHit> in_plane_hits(const ZeroPolytope& poly, const Eigen::Vector3d& normal) {
    const auto pts = poly.points();
    const Eigen::Vector3d u = Eigen::Vector3d::UnitZ().cross(normal).normalized();
    std::vector<double> s;
    for (const auto& v : pts) s.push_back(v.vec().dot(u));

    std::vector<FaceHit> hits;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(s[i]) <= kHitTol) hits.push_back(make_hit({i}, Eigen::VectorXd::Ones(1), pts));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (!((s[i] < -kHitTol && s[j] > kHitTol) || (s[i] > kHitTol && s[j] < -kHitTol))) continue;
            const double wi = s[j] / (s[j] - s[i]);
            Eigen::VectorXd w(2);
            w << wi, 1.0 - wi;
            hits.push_back(make_hit({i, j}, w, pts));
        }
    }
    return hits;
}

}  // namespace

BlochPoint bloch_from_z(Complex z) {
    const double d = 1.0 + std::norm(z);
    return {2.0 * z.real() / d, 2.0 * z.imag() / d, (1.0 - std::norm(z)) / d};
}

BlochPoint bloch_from_root(const ExtendedRoot& root) {
    if (root.at_infinity) return {0.0, 0.0, -1.0};
    return bloch_from_z(root.z);
}

BlochPoint axis_point(double p) { return {0.0, 0.0, 2.0 * p - 1.0}; }

BlochPoint bloch_from_density(const RankTwoMixture& basis, const Eigen::MatrixXcd& rho) {
    const auto& a = basis.psi1.amplitudes();
    const auto& b = basis.psi2.amplitudes();
    const Complex r11 = a.dot(rho * a);
    const Complex r22 = b.dot(rho * b);
    const Complex r21 = b.dot(rho * a);
    return {2.0 * r21.real(), 2.0 * r21.imag(), (r11 - r22).real()};
}

Eigen::MatrixXcd density_from_bloch(const RankTwoMixture& basis, const BlochPoint& point) {
    const auto& a = basis.psi1.amplitudes();
    const auto& b = basis.psi2.amplitudes();
    const Complex off(point.x, point.y);
    return 0.5 * (1.0 + point.z) * (a * a.adjoint()) + 0.5 * (1.0 - point.z) * (b * b.adjoint()) +
           0.5 * off * (b * a.adjoint()) + 0.5 * std::conj(off) * (a * b.adjoint());
}

PureState pure_state_from_bloch(const RankTwoMixture& basis, const BlochPoint& point) {
    const double phase = (point.x == 0.0 && point.y == 0.0) ? 0.0 : std::atan2(point.y, point.x);
    return basis.range_state(point.weight(), phase);
}

std::vector<BlochPoint> ZeroPolytope::points() const {
    std::vector<BlochPoint> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices) out.push_back(v.point);
    return out;
}

ZeroPolytope build_polytope(const ZeroSet& zeros) {
    if (zeros.roots.empty()) throw Error(ErrorCode::empty_polytope, "zero set has no roots");
    ZeroPolytope poly;
    for (std::size_t i = 0; i < zeros.roots.size(); ++i) {
        const BlochPoint pt = bloch_from_root(zeros.roots[i]);
        const bool duplicate = std::any_of(poly.vertices.begin(), poly.vertices.end(), [&](const PolytopeVertex& v) {
            return (v.point.vec() - pt.vec()).norm() <= 1e-12;
        });
        if (duplicate) continue;
        poly.vertices.push_back({pt, zeros.p0[i], zeros.phases[i], i});
    }

    const std::size_t n = poly.vertices.size();
    for (std::size_t a = 0; a < n; ++a) {
        poly.faces.push_back({a});
        for (std::size_t b = a + 1; b < n; ++b) {
            poly.faces.push_back({a, b});
            for (std::size_t c = b + 1; c < n; ++c) poly.faces.push_back({a, b, c});
        }
    }
    std::sort(poly.faces.begin(), poly.faces.end(), [](const auto& x, const auto& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });

    if (n >= 2) {
        Eigen::MatrixXd diff(static_cast<Eigen::Index>(n - 1), 3);
        for (std::size_t i = 1; i < n; ++i) {
            diff.row(static_cast<Eigen::Index>(i - 1)) = (poly.vertices[i].point.vec() - poly.vertices[0].point.vec()).transpose();
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i) poly.dimension += sv[i] > kRankTol ? 1 : 0;

        if (poly.dimension == 3) {
            Eigen::Matrix3d m;
            for (int i = 0; i < 3; ++i) m.row(i) = diff.row(i);
            poly.volume = std::abs(m.determinant()) / 6.0;
        } else if (poly.dimension == 2) {
            const Eigen::Vector3d e1 = svd.matrixV().col(0);
            const Eigen::Vector3d e2 = svd.matrixV().col(1);
            std::vector<Eigen::Vector2d> flat;
            for (const auto& v : poly.vertices) flat.emplace_back(v.point.vec().dot(e1), v.point.vec().dot(e2));
            poly.volume = polygon_area(std::move(flat));
        }
    }
    return poly;
}

std::optional<AxisInterval> axis_zero_interval(const ZeroPolytope& polytope) {
    std::vector<FaceHit> hits;
    bool handled = false;
    if (polytope.dimension == 2) {
        const std::size_t n = polytope.vertices.size();
        Eigen::MatrixXd diff(static_cast<Eigen::Index>(n - 1), 3);
        for (std::size_t i = 1; i < n; ++i) {
            diff.row(static_cast<Eigen::Index>(i - 1)) =
                (polytope.vertices[i].point.vec() - polytope.vertices[0].point.vec()).transpose();
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff, Eigen::ComputeFullV);
        const Eigen::Vector3d normal = svd.matrixV().col(2);
        const bool vertical = std::abs(normal.z()) <= kHitTol;
        const bool through_axis = std::abs(normal.dot(polytope.vertices[0].point.vec())) <= kHitTol;
        if (vertical && through_axis) {
            hits = in_plane_hits(polytope, normal);
            handled = true;
        }
    }
    if (!handled) hits = general_hits(polytope);
    if (hits.empty()) return std::nullopt;

    const auto lo = std::min_element(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
    const auto hi = std::max_element(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
    AxisInterval out;
    out.p_low = std::clamp(lo->p, 0.0, 1.0);
    out.p_high = std::clamp(hi->p, 0.0, 1.0);
    out.low_witness = *lo;
    out.high_witness = *hi;
    for (const auto& h : hits) {
        if (std::abs(h.p - lo->p) <= 1e-12 && simpler(h, out.low_witness)) out.low_witness = h;
        if (std::abs(h.p - hi->p) <= 1e-12 && simpler(h, out.high_witness)) out.high_witness = h;
    }
    return out;
}

std::vector<double> barycentric_weights(const BlochPoint& target, std::span<const BlochPoint> face) {
    if (face.empty() || face.size() > 3) {
        throw Error(ErrorCode::invalid_argument, "barycentric_weights needs 1 to 3 vertices");
    }
    const auto k = static_cast<Eigen::Index>(face.size());
    Eigen::MatrixXd m(4, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto& v = face[static_cast<std::size_t>(j)];
        m.col(j) << v.x, v.y, v.z, 1.0;
    }
    Eigen::Vector4d rhs(target.x, target.y, target.z, 1.0);
    const Eigen::VectorXd w = m.colPivHouseholderQr().solve(rhs);
    if ((m * w - rhs).norm() > kHitTol) throw Error(ErrorCode::infeasible, "target outside the face's affine hull");
    if (w.minCoeff() < -kHitTol) throw Error(ErrorCode::infeasible, "target outside the face");

    std::vector<double> out(static_cast<std::size_t>(k));
    double total = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) total += std::max(0.0, w[j]);
    for (Eigen::Index j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = std::max(0.0, w[j]) / total;
    return out;
}

bool polytope_contains(const ZeroPolytope& polytope, const BlochPoint& point, double tol) {
    const auto pts = polytope.points();
    const std::size_t n = pts.size();
    // Caratheodory: any hull point lies in a simplex of at most four vertices.
    for (unsigned mask = 1; mask < (1U << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1U << i)) idx.push_back(i);
        }
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd m(4, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& v = pts[idx[static_cast<std::size_t>(j)]];
            m.col(j) << v.x, v.y, v.z, 1.0;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        if (qr.rank() < k) continue;
        const Eigen::Vector4d rhs(point.x, point.y, point.z, 1.0);
        const Eigen::VectorXd w = qr.solve(rhs);
        if ((m * w - rhs).norm() <= tol && w.minCoeff() >= -tol) return true;
    }
    return false;
}

RayExtension ray_extend(const BlochPoint& anchor, const BlochPoint& target) {
    const Eigen::Vector3d a = anchor.vec();
    const Eigen::Vector3d t = target.vec();
    if (a.norm() > 1.0 + 1e-10 || t.norm() > 1.0 + 1e-10) {
        throw Error(ErrorCode::ill_posed, "ray_extend: point outside the Bloch ball");
    }
    const Eigen::Vector3d d = t - a;
    const double dd = d.squaredNorm();
    if (dd <= 1e-26) throw Error(ErrorCode::ill_posed, "ray_extend: target coincides with anchor");

    // |a + s d|^2 = 1, largest root s >= 1.
    const double b = 2.0 * a.dot(d);
    const double c = a.squaredNorm() - 1.0;
    const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * dd * c));
    double s = b <= 0.0 ? (-b + disc) / (2.0 * dd) : (-2.0 * c) / (b + disc);
    if (t.norm() >= 1.0 - 1e-14) s = 1.0;
    s = std::max(s, 1.0);

    RayExtension out;
    out.boundary = BlochPoint::from((a + s * d).normalized());
    out.lambda = 1.0 / s;
    return out;
}

}  // namespace tangleroof
