#include "tangleroof/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "tangleroof/error.hpp"
#include "tangleroof/invariants.hpp"
#include "tangleroof/parallel.hpp"

namespace tangleroof {

namespace {

constexpr std::array<int, 3> kFirstThree{0, 1, 2};
constexpr double kVolumeZero = 1e-7;

void check_weight(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_argument, "p must lie in [0, 1]");
}

// Unsigned tetrahedron volume of the zero set; 0 when fewer than four
// distinct vertices survive.
double tetra_volume(const ZeroPolytope& poly) {
    if (poly.vertices.size() != 4) return 0.0;
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        m.row(i) = (poly.vertices[static_cast<std::size_t>(i + 1)].point.vec() - poly.vertices[0].point.vec()).transpose();
    }
    return std::abs(m.determinant()) / 6.0;
}

double volume_at(double p, double phi, const ScanOptions& options) {
    return simplex_sample(p, phi, options).volume;
}

}  // namespace

RankTwoMixture toy_mixture(double p) {
    const PureState ghz = make_ghz(3);
    const PureState w = make_w(3);
    const double s = 1.0 / std::sqrt(2.0);
    return RankTwoMixture(superpose(ghz, w, s, s), superpose(ghz, w, s, -s), p);
}

ToyReport toy_report(const ImprovedBoundOptions& options) {
    ZeroAnalysis analysis = analyze_zeros(toy_mixture());
    if (!analysis.interval) throw Error(ErrorCode::infeasible, "toy mixture lost its zero interval");
    Decomposition low = analysis.witness_decomposition(analysis.interval->low_witness);
    Decomposition high = analysis.witness_decomposition(analysis.interval->high_witness);
    BoundCurve lin = linearized_upper_bound(analysis);
    ImprovedBound improved = improved_upper_bound(analysis, options);
    return {std::move(analysis), std::move(low), std::move(high), std::move(lin), std::move(improved)};
}

PureState four_qubit_state(double p, double phi) {
    check_weight(p);
    return superpose(make_ghz(4), make_w(4), std::sqrt(p), -std::polar(std::sqrt(1.0 - p), phi));
}

double q_of_p(double p) {
    check_weight(p);
    return (2.0 + std::sqrt(1.0 - p * p)) / 4.0;
}

ClosedFormCoefficients closed_form_coefficients(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_argument, "closed forms need p in (0, 1)");
    const double s = std::sqrt(1.0 - p * p);
    const double a = (1.0 + p) * (3.0 - p);
    const double b = (3.0 + p) * s;
    const auto root = [](double x) { return std::sqrt(std::max(0.0, x)); };
    ClosedFormCoefficients c{};
    c.f1 = root(2.0 / (a + b)) * p;
    c.g1 = root(p * (4.0 * s - 3.0 * p + 5.0) / (b + a));
    c.h1 = root(3.0 * p * (1.0 - p) / ((1.0 + p) * (1.0 + p) - (1.0 - p) * s));
    c.f2 = root(2.0 / (a - b)) * p;
    c.g2 = root(p * (4.0 * s + 3.0 * p - 5.0) / (b - a)) * (3.0 - 5.0 * p >= 0.0 ? 1.0 : -1.0);
    c.h2 = -root(3.0 * p * (1.0 - p) / ((1.0 + p) * (1.0 + p) + (1.0 - p) * s));
    return c;
}

std::pair<PureState, PureState> closed_form_eigenstates(double p, double phi) {
    const ClosedFormCoefficients c = closed_form_coefficients(p);
    const Eigen::VectorXcd e111 = PureState::basis("111").amplitudes();
    const Eigen::VectorXcd e000 = PureState::basis("000").amplitudes();
    const Eigen::VectorXcd w3 = make_w(3).amplitudes();
    const Complex down = std::polar(1.0, -phi);
    const Complex up = std::polar(1.0, phi);
    Eigen::VectorXcd v1 = c.f1 * down * e111 - c.g1 * e000 + c.h1 * up * w3;
    Eigen::VectorXcd v2 = c.f2 * down * e111 - c.g2 * e000 + c.h2 * up * w3;
    return {PureState(3, std::move(v1)), PureState(3, std::move(v2))};
}

RankTwoMixture reduced_mixture(double p, double phi, double tol_rank) {
    return reduced_mixture(p, phi, kFirstThree, tol_rank);
}

RankTwoMixture reduced_mixture(double p, double phi, std::span<const int> keep, double tol_rank) {
    check_weight(p);
    if (keep.size() != 3) throw Error(ErrorCode::invalid_argument, "reduced_mixture keeps three qubits");
    if (p == 1.0) return RankTwoMixture(PureState::basis("000"), PureState::basis("111"), 0.5);
    if (p == 0.0) return RankTwoMixture(make_w(3), PureState::basis("000"), 0.75);
    return rank_two_eigendecomposition(partial_trace(four_qubit_state(p, phi), keep), tol_rank);
}

SimplexSample simplex_sample(double p, double phi, const ScanOptions& options) {
    const ZeroAnalysis analysis = analyze_zeros(reduced_mixture(p, phi, options.tol_rank), options.tol_root);
    SimplexSample s;
    s.p = p;
    s.identically_zero = analysis.identically_zero;
    s.interval = analysis.zero_interval();
    if (analysis.polytope) {
        s.volume = tetra_volume(*analysis.polytope);
        s.dimension = analysis.polytope->dimension;
    } else {
        s.dimension = 3;
    }
    return s;
}

std::vector<SimplexSample> simplex_scan(double phi, std::span<const double> p_grid, const ScanOptions& options) {
    std::vector<SimplexSample> out(p_grid.size());
    parallel_for(p_grid.size(), options.parallelism,
                 [&](std::size_t i) { out[i] = simplex_sample(p_grid[i], phi, options); });
    return out;
}

std::optional<double> interior_volume_zero(double phi, std::span<const double> p_grid, const ScanOptions& options) {
    const auto samples = simplex_scan(phi, p_grid, options);
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const double left = samples[i - 1].volume;
        const double mid = samples[i].volume;
        const double right = samples[i + 1].volume;
        if (!(left > kVolumeZero && right > kVolumeZero && mid <= left && mid <= right)) continue;
        std::uintmax_t iterations = 200;
        const auto [at, value] = boost::math::tools::brent_find_minima(
            [&](double p) { return volume_at(p, phi, options); }, samples[i - 1].p, samples[i + 1].p,
            std::numeric_limits<double>::digits / 2, iterations);
        if (value < kVolumeZero) return at;
    }
    return std::nullopt;
}

std::vector<ThresholdSample> phi_threshold_scan(std::span<const double> phi_grid, std::span<const double> p_grid,
                                                const ScanOptions& options) {
    std::vector<ThresholdSample> out(phi_grid.size());
    ScanOptions inner = options;
    inner.parallelism = 1;
    parallel_for(phi_grid.size(), options.parallelism, [&](std::size_t i) {
        out[i] = {phi_grid[i], interior_volume_zero(phi_grid[i], p_grid, inner).has_value()};
    });
    return out;
}

std::pair<double, double> phi_threshold_bracket(double lo, double hi, std::span<const double> p_grid, double width,
                                                const ScanOptions& options) {
    const auto present = [&](double phi) { return interior_volume_zero(phi, p_grid, options).has_value(); };
    if (!present(lo) || present(hi)) {
        throw Error(ErrorCode::infeasible, "threshold bracket endpoints do not straddle the transition");
    }
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        (present(mid) ? lo : hi) = mid;
    }
    return {lo, hi};
}

MonogamyReport monogamy_report(double p, double phi, const ScanOptions& options) {
    const PureState psi = four_qubit_state(p, phi);
    MonogamyReport r;
    r.p = p;
    r.phi = phi;
    r.one_tangle = one_tangle(psi, 0);
    for (int j = 1; j <= 3; ++j) {
        const std::array<int, 2> keep{0, j};
        const double c = wootters_concurrence(partial_trace(psi, keep));
        r.pairwise[static_cast<std::size_t>(j - 1)] = c * c;
    }
    const std::array<std::array<int, 3>, 3> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}}};
    for (std::size_t t = 0; t < triples.size(); ++t) {
        const RankTwoMixture mix = reduced_mixture(p, phi, triples[t], options.tol_rank);
        const double bound = linearized_upper_bound(analyze_zeros(mix, options.tol_root))(mix.p);
        r.three_tangle_bounds[t] = bound * bound;
    }
    r.residual = r.one_tangle;
    for (const double v : r.pairwise) r.residual -= v;
    for (const double v : r.three_tangle_bounds) r.residual -= v;
    return r;
}

std::vector<MonogamyReport> monogamy_curve(std::span<const double> p_grid, double phi, const ScanOptions& options) {
    std::vector<MonogamyReport> out(p_grid.size());
    parallel_for(p_grid.size(), options.parallelism,
                 [&](std::size_t i) { out[i] = monogamy_report(p_grid[i], phi, options); });
    return out;
}

ZeroCheck ghzw_mixture_zero_check(double p) {
    check_weight(p);
    const Eigen::VectorXcd ghz = make_ghz(4).amplitudes();
    const Eigen::VectorXcd w = make_w(4).amplitudes();
    const Eigen::MatrixXcd rho4 = p * (ghz * ghz.adjoint()) + (1.0 - p) * (w * w.adjoint());
    const DensityMatrix reduced = partial_trace(DensityMatrix(4, rho4, 1e-10), kFirstThree);

    ZeroCheck out;
    const std::array<std::pair<PureState, double>, 4> parts{{
        {PureState::basis("000"), 0.5 * p},
        {PureState::basis("111"), 0.5 * p},
        {make_w(3), 0.75 * (1.0 - p)},
        {PureState::basis("000"), 0.25 * (1.0 - p)},
    }};
    for (const auto& [state, weight] : parts) {
        if (weight > 0.0) out.witness.push_back({state, weight, false});
    }
    out.reconstruction_error = (decomposition_density(out.witness) - reduced.entries()).cwiseAbs().maxCoeff();
    for (const auto& c : out.witness) out.max_c3 = std::max(out.max_c3, c3(c.state));
    out.zero = out.max_c3 <= 1e-10 && out.reconstruction_error <= 1e-9;
    return out;
}

}  // namespace tangleroof
