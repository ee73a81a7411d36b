#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tangleroof/bloch.hpp"
#include "tangleroof/state.hpp"
#include "tangleroof/zero_finder.hpp"

namespace tangleroof {

// A pure-state decomposition sum_i w_i |s_i><s_i|. Components flagged as
// zero states are exact roots of the pencil; their numerical c3 is only
// sqrt(roundoff) (~1e-8) and they contribute 0 to the certified value.
struct DecompositionComponent {
    PureState state;
    double weight = 0.0;
    bool zero_state = false;
};

using Decomposition = std::vector<DecompositionComponent>;

double decomposition_value(const Decomposition& d);
Eigen::MatrixXcd decomposition_density(const Decomposition& d);
// wa * a + wb * b, merged component lists.
Decomposition blend(const Decomposition& a, double wa, const Decomposition& b, double wb);

// Zero-set geometry of one rank-two mixture, computed once and shared by the
// bound constructions.
struct ZeroAnalysis {
    RankTwoMixture mixture;
    bool identically_zero = false;
    std::optional<ZeroSet> zeros;
    std::optional<ZeroPolytope> polytope;
    std::optional<AxisInterval> interval;

    // [0, 1] for an identically vanishing pencil.
    std::optional<std::pair<double, double>> zero_interval() const;
    bool inside_zero_interval(double p) const;
    // Zero decomposition of rho(p) for p inside the zero interval.
    Decomposition zero_decomposition(double p) const;
    Decomposition witness_decomposition(const FaceHit& hit) const;
};

ZeroAnalysis analyze_zeros(const RankTwoMixture& mix, double root_tol = kDefaultRootTol);

enum class Provenance { endpoint, zero_interval, pivot, linearized };
const char* to_string(Provenance p) noexcept;

struct BoundKnot {
    double p = 0.0;
    double value = 0.0;
    Provenance provenance = Provenance::endpoint;
    Decomposition decomposition;
};

// Piecewise-linear curve over [0, 1]; knots strictly increasing in p.
class BoundCurve {
public:
    BoundCurve() = default;
    explicit BoundCurve(std::vector<BoundKnot> knots);

    const std::vector<BoundKnot>& knots() const noexcept { return knots_; }
    double operator()(double p) const;
    // Realizing decomposition of rho(p): the convex blend of the neighbouring
    // knot decompositions.
    Decomposition decomposition_at(double p) const;

private:
    std::size_t segment(double p) const;
    std::vector<BoundKnot> knots_;
};

enum class AnchorKind { vertex, pair_mixture, axis_interval_point, face_grid };
const char* to_string(AnchorKind k) noexcept;

// A zero-tangle point of the polytope used as pivot for ray decompositions.
struct Anchor {
    BlochPoint point;
    AnchorKind construction = AnchorKind::vertex;
    // Convex weights over ZeroPolytope::vertices.
    std::vector<std::pair<std::size_t, double>> vertex_weights;
    // Weighted numerical c3 of the zero components (0 up to roundoff).
    double certificate = 0.0;
};

// Polytope vertices, conjugate-pair midpoints, the interval endpoints and a
// barycentric grid of `face_grid` subdivisions over each maximal face.
std::vector<Anchor> default_anchors(const ZeroAnalysis& analysis, int face_grid = 5);

// C3 of Z(p, phi) = sqrt(p) psi1 - e^{i phi} sqrt(1 - p) psi2 at each grid p.
std::vector<std::pair<double, double>> characteristic_curve(const RankTwoMixture& mix, double phi,
                                                            std::span<const double> grid);

// Knots (0, c3(psi2)), (p_low, 0), (p_high, 0), (1, c3(psi1)); the plain chord
// without an interval and the zero curve for an identically vanishing pencil.
BoundCurve linearized_upper_bound(const ZeroAnalysis& analysis);
BoundCurve linearized_upper_bound(const RankTwoMixture& mix);

struct PivotResult {
    double value = 0.0;
    Provenance family = Provenance::pivot;
    Decomposition decomposition;
    std::optional<std::size_t> anchor;
};

// min over anchors of lambda * c3(boundary state), min-ed with the
// linearized value at p; 0 inside the zero interval.
PivotResult pivot_upper_bound(const ZeroAnalysis& analysis, double p, std::span<const Anchor> anchors);
PivotResult pivot_upper_bound(const ZeroAnalysis& analysis, double p, std::span<const Anchor> anchors,
                              const BoundCurve& linearized);

struct BoundSample {
    double p = 0.0;
    double value = 0.0;
    Provenance provenance = Provenance::pivot;
    Decomposition decomposition;
};

// Greatest convex minorant of the samples, with knots on sample abscissae.
BoundCurve convex_envelope(std::vector<BoundSample> samples);
BoundCurve convex_envelope(std::span<const std::pair<double, double>> samples);

// Walk away from knot `start` while every intermediate knot stays within
// `tol` of the chord; returns the p of the last knot reached.
double linear_reach(const BoundCurve& curve, std::size_t start, int direction, double tol = 1e-6);

enum class Family { zero_interval, linearized, pivot, envelope };
const char* to_string(Family f) noexcept;

struct ImprovedBoundOptions {
    int grid_points = 401;
    int face_grid = 5;
    int parallelism = 1;
    double transition_tol = 1e-6;
    // Extra samples spread over two grid cells on each side of a detected
    // transition point.
    int refine_points = 41;
};

struct ImprovedBound {
    std::vector<double> grid;
    std::vector<double> linearized;
    std::vector<double> pivot;
    std::vector<double> envelope;
    std::vector<Family> achieving;
    BoundCurve linearized_curve;
    BoundCurve envelope_curve;
    std::vector<Anchor> anchors;
    // Left and right ends of the linear pieces attached to the zero interval.
    std::optional<double> p_left;
    std::optional<double> p_right;

    double operator()(double p) const { return envelope_curve(p); }
};

ImprovedBound improved_upper_bound(const ZeroAnalysis& analysis, const ImprovedBoundOptions& options = {});

std::vector<double> uniform_grid(int points, double lo = 0.0, double hi = 1.0);

}  // namespace tangleroof
