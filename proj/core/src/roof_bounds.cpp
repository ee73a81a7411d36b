#include "tangleroof/roof_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tangleroof/error.hpp"
#include "tangleroof/invariants.hpp"
#include "tangleroof/parallel.hpp"

namespace tangleroof {

namespace {

constexpr double kKnotEps = 1e-12;
constexpr double kSameTol = 1e-12;
constexpr double kConjTol = 1e-9;
constexpr double kCoincide = 1e-13;

Decomposition single(const PureState& s, bool zero) { return {{s, 1.0, zero}}; }

BlochPoint weighted_point(const ZeroPolytope& poly, const std::vector<std::pair<std::size_t, double>>& w) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (const auto& [i, wi] : w) acc += wi * poly.vertices[i].point.vec();
    return BlochPoint::from(acc);
}

}  // namespace

double decomposition_value(const Decomposition& d) {
    double acc = 0.0;
    for (const auto& c : d) {
        if (!c.zero_state) acc += c.weight * c3(c.state);
    }
    return acc;
}

Eigen::MatrixXcd decomposition_density(const Decomposition& d) {
    if (d.empty()) throw Error(ErrorCode::invalid_argument, "empty decomposition");
    const auto n = static_cast<Eigen::Index>(d.front().state.dim());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& c : d) {
        const auto& a = c.state.amplitudes();
        rho += c.weight * (a * a.adjoint()) / c.state.norm_squared();
    }
    return rho;
}

Decomposition blend(const Decomposition& a, double wa, const Decomposition& b, double wb) {
    Decomposition out;
    out.reserve(a.size() + b.size());
    for (const auto& c : a) {
        if (wa * c.weight > 0.0) out.push_back({c.state, wa * c.weight, c.zero_state});
    }
    for (const auto& c : b) {
        if (wb * c.weight > 0.0) out.push_back({c.state, wb * c.weight, c.zero_state});
    }
    return out;
}

std::optional<std::pair<double, double>> ZeroAnalysis::zero_interval() const {
    if (identically_zero) return std::pair{0.0, 1.0};
    if (interval) return std::pair{interval->p_low, interval->p_high};
    return std::nullopt;
}

bool ZeroAnalysis::inside_zero_interval(double p) const {
    const auto iv = zero_interval();
    return iv && p >= iv->first - 1e-15 && p <= iv->second + 1e-15;
}

Decomposition ZeroAnalysis::witness_decomposition(const FaceHit& hit) const {
    Decomposition out;
    for (std::size_t k = 0; k < hit.face.size(); ++k) {
        const std::size_t root = polytope->vertices[hit.face[k]].root_index;
        out.push_back({zeros->states[root], hit.weights[k], true});
    }
    return out;
}

Decomposition ZeroAnalysis::zero_decomposition(double p) const {
    if (!inside_zero_interval(p)) throw Error(ErrorCode::invalid_argument, "p lies outside the zero interval");
    if (identically_zero) {
        return blend(single(mixture.psi1, true), p, single(mixture.psi2, true), 1.0 - p);
    }
    const Decomposition low = witness_decomposition(interval->low_witness);
    const double width = interval->p_high - interval->p_low;
    if (width <= kKnotEps) return low;
    const double t = std::clamp((interval->p_high - p) / width, 0.0, 1.0);
    return blend(low, t, witness_decomposition(interval->high_witness), 1.0 - t);
}

ZeroAnalysis analyze_zeros(const RankTwoMixture& mix, double root_tol) {
    ZeroAnalysis out{mix, false, std::nullopt, std::nullopt, std::nullopt};
    try {
        out.zeros = zero_set(mix, root_tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::identically_zero) throw;
        out.identically_zero = true;
        return out;
    }
    out.polytope = build_polytope(*out.zeros);
    out.interval = axis_zero_interval(*out.polytope);
    return out;
}

const char* to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::endpoint: return "endpoint";
        case Provenance::zero_interval: return "zero-interval";
        case Provenance::pivot: return "pivot";
        case Provenance::linearized: return "linearized";
    }
    return "unknown";
}

const char* to_string(AnchorKind k) noexcept {
    switch (k) {
        case AnchorKind::vertex: return "vertex";
        case AnchorKind::pair_mixture: return "pair-mixture";
        case AnchorKind::axis_interval_point: return "axis-interval-point";
        case AnchorKind::face_grid: return "face-grid";
    }
    return "unknown";
}

const char* to_string(Family f) noexcept {
    switch (f) {
        case Family::zero_interval: return "zero-interval";
        case Family::linearized: return "linearized";
        case Family::pivot: return "pivot";
        case Family::envelope: return "envelope";
    }
    return "unknown";
}

BoundCurve::BoundCurve(std::vector<BoundKnot> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw Error(ErrorCode::invalid_argument, "bound curve needs at least one knot");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i].p > knots_[i - 1].p)) {
            throw Error(ErrorCode::invalid_argument, "bound curve knots must be strictly increasing in p");
        }
    }
}

std::size_t BoundCurve::segment(double p) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), p,
                                     [](double x, const BoundKnot& k) { return x < k.p; });
    const auto idx = static_cast<std::size_t>(it - knots_.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, knots_.size() - 2);
}

double BoundCurve::operator()(double p) const {
    if (knots_.empty()) throw Error(ErrorCode::invalid_argument, "empty bound curve");
    if (knots_.size() == 1 || p <= knots_.front().p) return knots_.front().value;
    if (p >= knots_.back().p) return knots_.back().value;
    const auto i = segment(p);
    const auto& a = knots_[i];
    const auto& b = knots_[i + 1];
    const double t = (b.p - p) / (b.p - a.p);
    return t * a.value + (1.0 - t) * b.value;
}

Decomposition BoundCurve::decomposition_at(double p) const {
    if (knots_.empty()) throw Error(ErrorCode::invalid_argument, "empty bound curve");
    if (knots_.size() == 1 || p <= knots_.front().p) return knots_.front().decomposition;
    if (p >= knots_.back().p) return knots_.back().decomposition;
    const auto i = segment(p);
    const auto& a = knots_[i];
    const auto& b = knots_[i + 1];
    const double t = (b.p - p) / (b.p - a.p);
    return blend(a.decomposition, t, b.decomposition, 1.0 - t);
}

std::vector<Anchor> default_anchors(const ZeroAnalysis& analysis, int face_grid) {
    std::vector<Anchor> out;
    if (!analysis.polytope) return out;
    const auto& poly = *analysis.polytope;
    const auto& states = analysis.zeros->states;

    const auto add = [&](AnchorKind kind, std::vector<std::pair<std::size_t, double>> w) {
        const BlochPoint pt = weighted_point(poly, w);
        for (const auto& a : out) {
            if ((a.point.vec() - pt.vec()).norm() <= kSameTol) return;
        }
        double cert = 0.0;
        for (const auto& [i, wi] : w) cert += wi * c3(states[poly.vertices[i].root_index]);
        out.push_back({pt, kind, std::move(w), cert});
    };

    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) add(AnchorKind::vertex, {{i, 1.0}});

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& a = poly.vertices[i].point;
            const auto& b = poly.vertices[j].point;
            const bool conjugate = std::abs(a.x - b.x) <= kConjTol && std::abs(a.y + b.y) <= kConjTol &&
                                   std::abs(a.z - b.z) <= kConjTol && std::abs(a.y) > kConjTol;
            if (conjugate) add(AnchorKind::pair_mixture, {{i, 0.5}, {j, 0.5}});
        }
    }

    if (analysis.interval) {
        for (const FaceHit* hit : {&analysis.interval->low_witness, &analysis.interval->high_witness}) {
            std::vector<std::pair<std::size_t, double>> w;
            for (std::size_t k = 0; k < hit->face.size(); ++k) w.emplace_back(hit->face[k], hit->weights[k]);
            add(AnchorKind::axis_interval_point, std::move(w));
        }
    }

    if (face_grid >= 1 && n >= 2) {
        const double step = 1.0 / face_grid;
        for (const auto& face : poly.faces) {
            if (face.size() != std::min<std::size_t>(3, n)) continue;
            for (int i = 0; i <= face_grid; ++i) {
                for (int j = 0; i + j <= face_grid; ++j) {
                    const int k = face_grid - i - j;
                    std::vector<std::pair<std::size_t, double>> w;
                    if (i > 0) w.emplace_back(face[0], i * step);
                    if (j > 0) w.emplace_back(face[1], j * step);
                    if (face.size() == 3 && k > 0) w.emplace_back(face[2], k * step);
                    if (face.size() == 2 && k > 0) continue;
                    add(AnchorKind::face_grid, std::move(w));
                }
            }
        }
    }
    return out;
}

std::vector<std::pair<double, double>> characteristic_curve(const RankTwoMixture& mix, double phi,
                                                            std::span<const double> grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (const double p : grid) out.emplace_back(p, c3(mix.range_state(p, phi + std::numbers::pi)));
    return out;
}

BoundCurve linearized_upper_bound(const ZeroAnalysis& analysis) {
    const auto& mix = analysis.mixture;
    if (analysis.identically_zero) {
        return BoundCurve({{0.0, 0.0, Provenance::zero_interval, single(mix.psi2, true)},
                           {1.0, 0.0, Provenance::zero_interval, single(mix.psi1, true)}});
    }
    const BoundKnot left{0.0, c3(mix.psi2), Provenance::endpoint, single(mix.psi2, false)};
    const BoundKnot right{1.0, c3(mix.psi1), Provenance::endpoint, single(mix.psi1, false)};
    if (!analysis.interval) return BoundCurve({left, right});

    const auto& iv = *analysis.interval;
    std::vector<BoundKnot> knots;
    if (iv.p_low > kKnotEps) knots.push_back(left);
    knots.push_back({iv.p_low > kKnotEps ? iv.p_low : 0.0, 0.0, Provenance::zero_interval,
                     analysis.witness_decomposition(iv.low_witness)});
    if (iv.p_high - iv.p_low > kKnotEps) {
        knots.push_back({iv.p_high < 1.0 - kKnotEps ? iv.p_high : 1.0, 0.0, Provenance::zero_interval,
                         analysis.witness_decomposition(iv.high_witness)});
    }
    if (knots.back().p < 1.0 - kKnotEps) knots.push_back(right);
    return BoundCurve(std::move(knots));
}

BoundCurve linearized_upper_bound(const RankTwoMixture& mix) { return linearized_upper_bound(analyze_zeros(mix)); }

PivotResult pivot_upper_bound(const ZeroAnalysis& analysis, double p, std::span<const Anchor> anchors) {
    return pivot_upper_bound(analysis, p, anchors, linearized_upper_bound(analysis));
}

PivotResult pivot_upper_bound(const ZeroAnalysis& analysis, double p, std::span<const Anchor> anchors,
                              const BoundCurve& linearized) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_argument, "p must lie in [0, 1]");
    if (analysis.inside_zero_interval(p)) {
        return {0.0, Provenance::zero_interval, analysis.zero_decomposition(p), std::nullopt};
    }
    PivotResult best{linearized(p), Provenance::linearized, linearized.decomposition_at(p), std::nullopt};
    const BlochPoint target = axis_point(p);
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        const auto& anchor = anchors[a];
        if ((anchor.point.vec() - target.vec()).norm() <= kCoincide) continue;
        const RayExtension ray = ray_extend(anchor.point, target);
        const PureState boundary = pure_state_from_bloch(analysis.mixture, ray.boundary);
        const double candidate = ray.lambda * c3(boundary);
        if (!(candidate < best.value)) continue;

        Decomposition d{{boundary, ray.lambda, false}};
        for (const auto& [v, w] : anchor.vertex_weights) {
            const std::size_t root = analysis.polytope->vertices[v].root_index;
            d.push_back({analysis.zeros->states[root], (1.0 - ray.lambda) * w, true});
        }
        best = {decomposition_value(d), Provenance::pivot, std::move(d), a};
    }
    return best;
}

BoundCurve convex_envelope(std::vector<BoundSample> samples) {
    if (samples.size() < 2) throw Error(ErrorCode::invalid_argument, "convex envelope needs at least 2 samples");
    std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.p < b.p; });

    std::vector<BoundSample> unique;
    for (auto& s : samples) {
        if (!unique.empty() && s.p - unique.back().p <= 1e-15) {
            if (s.value < unique.back().value) unique.back() = std::move(s);
            continue;
        }
        unique.push_back(std::move(s));
    }
    if (unique.size() < 2) throw Error(ErrorCode::invalid_argument, "convex envelope needs 2 distinct abscissae");

    std::vector<BoundSample> hull;
    for (auto& s : unique) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.p - a.p) * (s.value - a.value) - (b.value - a.value) * (s.p - a.p);
            if (cross > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(std::move(s));
    }

    std::vector<BoundKnot> knots;
    knots.reserve(hull.size());
    for (auto& s : hull) knots.push_back({s.p, s.value, s.provenance, std::move(s.decomposition)});
    return BoundCurve(std::move(knots));
}

BoundCurve convex_envelope(std::span<const std::pair<double, double>> samples) {
    std::vector<BoundSample> s;
    s.reserve(samples.size());
    for (const auto& [p, v] : samples) s.push_back({p, v, Provenance::pivot, {}});
    return convex_envelope(std::move(s));
}

double linear_reach(const BoundCurve& curve, std::size_t start, int direction, double tol) {
    const auto& k = curve.knots();
    if (start >= k.size()) throw Error(ErrorCode::invalid_argument, "linear_reach start knot out of range");
    const auto n = static_cast<long>(k.size());
    const long s = static_cast<long>(start);
    const long dir = direction >= 0 ? 1 : -1;
    long reached = s;
    for (long j = s + dir; j >= 0 && j < n; j += dir) {
        const auto& a = k[static_cast<std::size_t>(s)];
        const auto& b = k[static_cast<std::size_t>(j)];
        bool straight = true;
        for (long m = s + dir; m != j; m += dir) {
            const auto& c = k[static_cast<std::size_t>(m)];
            const double chord = a.value + (b.value - a.value) * (c.p - a.p) / (b.p - a.p);
            if (std::abs(c.value - chord) > tol) {
                straight = false;
                break;
            }
        }
        if (!straight) break;
        reached = j;
    }
    return k[static_cast<std::size_t>(reached)].p;
}

std::vector<double> uniform_grid(int points, double lo, double hi) {
    if (points < 2) throw Error(ErrorCode::invalid_argument, "grid needs at least 2 points");
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    out.back() = hi;
    return out;
}

ImprovedBound improved_upper_bound(const ZeroAnalysis& analysis, const ImprovedBoundOptions& options) {
    ImprovedBound out;
    out.grid = uniform_grid(options.grid_points);
    const auto iv = analysis.zero_interval();
    if (iv) {
        for (const double knot : {iv->first, iv->second}) {
            const auto near = std::find_if(out.grid.begin(), out.grid.end(),
                                           [&](double g) { return std::abs(g - knot) <= kKnotEps; });
            if (near != out.grid.end()) {
                *near = knot;
            } else {
                out.grid.insert(std::lower_bound(out.grid.begin(), out.grid.end(), knot), knot);
            }
        }
    }

    out.anchors = default_anchors(analysis, options.face_grid);
    out.linearized_curve = linearized_upper_bound(analysis);

    const auto evaluate = [&](const std::vector<double>& ps) {
        std::vector<PivotResult> res(ps.size());
        parallel_for(ps.size(), options.parallelism, [&](std::size_t i) {
            res[i] = pivot_upper_bound(analysis, ps[i], out.anchors, out.linearized_curve);
        });
        return res;
    };
    std::vector<double> sample_p = out.grid;
    std::vector<PivotResult> sample_r = evaluate(sample_p);

    const auto build_envelope = [&] {
        std::vector<BoundSample> samples;
        samples.reserve(sample_p.size());
        for (std::size_t i = 0; i < sample_p.size(); ++i) {
            samples.push_back({sample_p[i], sample_r[i].value, sample_r[i].family, sample_r[i].decomposition});
        }
        out.envelope_curve = convex_envelope(std::move(samples));
    };
    const auto detect = [&] {
        out.p_left.reset();
        out.p_right.reset();
        if (!iv || analysis.identically_zero) return;
        const auto& knots = out.envelope_curve.knots();
        const auto find = [&](double p) -> std::optional<std::size_t> {
            for (std::size_t k = 0; k < knots.size(); ++k) {
                if (std::abs(knots[k].p - p) <= kKnotEps) return k;
            }
            return std::nullopt;
        };
        if (const auto hi = find(iv->second); hi && iv->second < 1.0 - kKnotEps) {
            out.p_right = linear_reach(out.envelope_curve, *hi, +1, options.transition_tol);
        }
        if (const auto lo = find(iv->first); lo && iv->first > kKnotEps) {
            out.p_left = linear_reach(out.envelope_curve, *lo, -1, options.transition_tol);
        }
    };
    build_envelope();
    detect();

    // Resolve the transition points below the grid spacing by resampling a
    // few cells around each one.
    if (options.refine_points > 0) {
        const double h = 1.0 / (options.grid_points - 1);
        std::vector<double> extra;
        for (const auto& t : {out.p_left, out.p_right}) {
            if (!t) continue;
            const double lo = std::max(0.0, *t - 2.0 * h);
            const double hi = std::min(1.0, *t + 2.0 * h);
            for (const double p : uniform_grid(options.refine_points, lo, hi)) {
                if (!analysis.inside_zero_interval(p)) extra.push_back(p);
            }
        }
        if (!extra.empty()) {
            const auto extra_r = evaluate(extra);
            sample_p.insert(sample_p.end(), extra.begin(), extra.end());
            sample_r.insert(sample_r.end(), extra_r.begin(), extra_r.end());
            build_envelope();
            detect();
        }
    }

    const std::size_t n = out.grid.size();
    out.linearized.resize(n);
    out.pivot.resize(n);
    out.envelope.resize(n);
    out.achieving.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = out.grid[i];
        out.linearized[i] = out.linearized_curve(p);
        out.pivot[i] = sample_r[i].value;
        out.envelope[i] = std::min(out.envelope_curve(p), out.pivot[i]);
        if (analysis.inside_zero_interval(p)) {
            out.achieving[i] = Family::zero_interval;
        } else if (out.envelope[i] < out.pivot[i] - 1e-12) {
            out.achieving[i] = Family::envelope;
        } else {
            out.achieving[i] = sample_r[i].family == Provenance::pivot ? Family::pivot : Family::linearized;
        }
    }
    return out;
}

}  // namespace tangleroof
