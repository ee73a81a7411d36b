// Acceptance suite: one PASS/FAIL line per criterion. Exits 1 when any
// criterion fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tangleroof/bloch.hpp"
#include "tangleroof/error.hpp"
#include "tangleroof/invariants.hpp"
#include "tangleroof/roof_bounds.hpp"
#include "tangleroof/scenarios.hpp"
#include "tangleroof/zero_finder.hpp"

namespace tr = tangleroof;

namespace {

constexpr double kEndpointTol = 1e-12;
constexpr double kRootModTol = 1e-3;
constexpr double kRootArgTol = 1e-3;
constexpr double kP0Tol = 1e-4;
constexpr double kIntervalTol = 1e-4;
constexpr double kReconTol = 1e-9;
constexpr double kWeightTol = 1e-5;
constexpr int kCharGrid = 10000;
constexpr double kCharTol = 2e-3;
constexpr double kOrderSlack = 1e-12;
constexpr double kGapMin = 1e-3;
constexpr double kTransitionTol = 2e-3;
constexpr int kClosedFormSamples = 50;
constexpr double kEigenvalueTol = 1e-10;
constexpr double kOverlapTol = 1e-8;
constexpr double kBoundaryTol = 1e-3;
constexpr double kPeriodTol = 1e-9;
constexpr double kResidualTol = 1e-9;
constexpr int kMonogamyGrid = 101;
constexpr int kOracleP = 20;
constexpr int kOracleDecompositions = 100000;
constexpr double kOracleSlack = 1e-9;
constexpr double kZeroC3 = 1e-5;
constexpr int kExactnessP = 10;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
    std::printf("%s  C%-2d %-34s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 2 * std::numbers::pi);
    if (d > std::numbers::pi) d -= 2 * std::numbers::pi;
    if (d < -std::numbers::pi) d += 2 * std::numbers::pi;
    return std::abs(d);
}

double recon_error(const tr::Decomposition& d, const tr::RankTwoMixture& mix, double p) {
    return (tr::decomposition_density(d) - mix.density_at(p)).cwiseAbs().maxCoeff();
}

Outcome fig2_endpoints() {
    const auto mix = tr::toy_mixture();
    const double low = std::abs(tr::c3(mix.psi2) - std::sqrt(8 * std::sqrt(6.0) - 9) / 6);
    const double high = std::abs(tr::c3(mix.psi1) - std::sqrt(8 * std::sqrt(6.0) + 9) / 6);
    return {std::max(low, high) <= kEndpointTol, fmt("err minus=%.2e plus=%.2e (tol %.0e)", low, high, kEndpointTol)};
}

Outcome toy_roots(const tr::ZeroAnalysis& a) {
    const std::array<tr::Complex, 4> reference{tr::Complex(1.0, 0.0), tr::Complex(-7.7543, 0.0),
                                               std::polar(0.5899, 1.8649), std::polar(0.5899, -1.8649)};
    double worst_mod = 0.0;
    double worst_arg = 0.0;
    std::vector<bool> used(a.zeros->size(), false);
    for (const auto& ref : reference) {
        std::size_t best = 0;
        double dist = 1e300;
        for (std::size_t i = 0; i < a.zeros->size(); ++i) {
            const double d = std::abs(-a.zeros->roots[i].z - ref);
            if (!used[i] && d < dist) {
                dist = d;
                best = i;
            }
        }
        used[best] = true;
        const tr::Complex z = -a.zeros->roots[best].z;
        worst_mod = std::max(worst_mod, std::abs(std::abs(z) - std::abs(ref)));
        worst_arg = std::max(worst_arg, angle_diff(std::arg(z), std::arg(ref)));
    }
    std::vector<double> p0 = a.zeros->expanded_p0();
    std::sort(p0.begin(), p0.end());
    const std::array<double, 4> p0_ref{0.01636, 0.5, 0.74182, 0.74182};
    double worst_p0 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) worst_p0 = std::max(worst_p0, std::abs(p0[i] - p0_ref[i]));
    const bool ok = worst_mod <= kRootModTol && worst_arg <= kRootArgTol && worst_p0 <= kP0Tol;
    return {ok, fmt("mod %.1e arg %.1e p0 %.1e", worst_mod, worst_arg, worst_p0)};
}

Outcome toy_interval(const tr::ZeroAnalysis& a) {
    const auto& iv = *a.interval;
    const double d_iv = std::max(std::abs(iv.p_low - 0.11423), std::abs(iv.p_high - 0.69289));
    const auto low = a.witness_decomposition(iv.low_witness);
    const auto high = a.witness_decomposition(iv.high_witness);
    const double rec = std::max(recon_error(low, a.mixture, iv.p_low), recon_error(high, a.mixture, iv.p_high));
    auto weights = [](const tr::Decomposition& d) {
        std::vector<double> w;
        for (const auto& c : d) w.push_back(c.weight);
        std::sort(w.begin(), w.end());
        return w;
    };
    const std::vector<double> want_low{0.202362, 0.797638};
    const std::vector<double> want_high{0.202362, 0.398819, 0.398819};
    double dw = 1.0;
    const auto wl = weights(low);
    const auto wh = weights(high);
    if (wl.size() == want_low.size() && wh.size() == want_high.size()) {
        dw = 0.0;
        for (std::size_t i = 0; i < wl.size(); ++i) dw = std::max(dw, std::abs(wl[i] - want_low[i]));
        for (std::size_t i = 0; i < wh.size(); ++i) dw = std::max(dw, std::abs(wh[i] - want_high[i]));
    }
    const bool ok = d_iv <= kIntervalTol && rec <= kReconTol && dw <= kWeightTol;
    return {ok, fmt("[%.6f, %.6f] d=%.1e recon/weights %.1e", iv.p_low, iv.p_high, d_iv, std::max(rec, dw))};
}

Outcome char_zeros() {
    const auto mix = tr::toy_mixture();
    const auto grid = tr::uniform_grid(kCharGrid);
    const std::array<std::pair<double, double>, 4> cases{
        {{std::numbers::pi, 0.01636}, {0.0, 0.5}, {1.8649, 0.7418}, {-1.8649, 0.7418}}};
    double worst = 0.0;
    std::string detail;
    for (const auto& [phi, want] : cases) {
        const auto curve = tr::characteristic_curve(mix, phi, grid);
        const auto it = std::min_element(curve.begin(), curve.end(),
                                         [](const auto& x, const auto& y) { return x.second < y.second; });
        worst = std::max(worst, std::abs(it->first - want));
        detail += fmt("%.5f ", it->first);
    }
    return {worst <= kCharTol, "argmin " + detail + fmt("worst %.1e", worst)};
}

Outcome beyond_linearization(const tr::ImprovedBound& b) {
    double over = -1e300;
    double gap = 0.0;
    for (std::size_t i = 0; i < b.grid.size(); ++i) {
        over = std::max(over, b.envelope[i] - b.linearized[i]);
        if (b.grid[i] > 0.8240 && b.grid[i] < 1.0) gap = std::max(gap, b.linearized[i] - b.envelope[i]);
    }
    const double pr = b.p_right.value_or(-1.0);
    const double pl = b.p_left.value_or(-1.0);
    const bool ok = over <= kOrderSlack && gap >= kGapMin && std::abs(pr - 0.8240) <= kTransitionTol &&
                    std::abs(pl - 0.04395) <= kTransitionTol;
    return {ok, fmt("max(env-lin) %.1e gap %.4f p_r %.5f p_l %.5f", over, gap, pr, pl)};
}

Outcome four_qubit_closed_forms() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> up(0.01, 0.99);
    std::uniform_real_distribution<double> uphi(0.0, 2 * std::numbers::pi);
    double worst_q = 0.0;
    double worst_overlap = 0.0;
    for (int i = 0; i < kClosedFormSamples; ++i) {
        const double p = up(rng);
        const double phi = uphi(rng);
        const auto mix = tr::reduced_mixture(p, phi);
        const auto [a, b] = tr::closed_form_eigenstates(p, phi);
        worst_q = std::max(worst_q, std::abs(mix.p - tr::q_of_p(p)));
        worst_overlap = std::max(worst_overlap, 1.0 - std::abs(tr::inner_product(a, mix.psi1)));
        worst_overlap = std::max(worst_overlap, 1.0 - std::abs(tr::inner_product(b, mix.psi2)));
    }
    return {worst_q <= kEigenvalueTol && worst_overlap <= kOverlapTol,
            fmt("|q err| %.1e  1-overlap %.1e", worst_q, worst_overlap)};
}

Outcome simplex_scan() {
    // Boundary of the all-real-roots region at phi = 0.
    double lo = 0.70;
    double hi = 0.75;
    const auto flat = [](double p) { return tr::simplex_sample(p, 0.0).dimension == 2; };
    bool bracket_ok = !flat(lo) && flat(hi);
    while (bracket_ok && hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (flat(mid) ? hi : lo) = mid;
    }
    const double boundary = 0.5 * (lo + hi);
    bool upper_flat = true;
    for (const double p : tr::uniform_grid(200, 0.7221, 0.999)) upper_flat = upper_flat && flat(p);
    bool quarter_full = true;
    for (int i = 1; i < 200; ++i) quarter_full = quarter_full && tr::simplex_sample(i / 200.0, std::numbers::pi / 4).dimension == 3;
    const bool ok = bracket_ok && std::abs(boundary - 0.722074) <= kBoundaryTol && upper_flat && quarter_full;
    return {ok, fmt("boundary %.6f", boundary) + "  dim2 on [0.7221, 0.999] " + (upper_flat ? "yes" : "no") +
                    "  dim3 at pi/4 " + (quarter_full ? "yes" : "no")};
}

std::vector<double> threshold_p_grid() { return tr::uniform_grid(199, 0.005, 0.995); }

Outcome phi_threshold() {
    const auto grid = threshold_p_grid();
    try {
        const auto [lo, hi] = tr::phi_threshold_bracket(0.4, 0.7, grid, 1e-4);
        return {lo >= 0.51 && hi <= 0.54, fmt("bracket [%.5f, %.5f]", lo, hi)};
    } catch (const tr::Error& e) {
        return {false, e.what()};
    }
}

Outcome periodicity() {
    double worst = 0.0;
    for (const double phi : {0.0, 0.3, 1.1, 2.4}) {
        for (int i = 1; i < 25; ++i) {
            const double p = i / 25.0;
            const auto m1 = tr::reduced_mixture(p, phi);
            const auto m2 = tr::reduced_mixture(p, phi + std::numbers::pi / 2);
            worst = std::max(worst, std::abs(m1.p - m2.p));
            worst = std::max(worst, std::abs(std::abs(tr::three_tangle(m1.psi1)) - std::abs(tr::three_tangle(m2.psi1))));
            worst = std::max(worst, std::abs(std::abs(tr::three_tangle(m1.psi2)) - std::abs(tr::three_tangle(m2.psi2))));
            const auto s1 = tr::simplex_sample(p, phi);
            const auto s2 = tr::simplex_sample(p, phi + std::numbers::pi / 2);
            worst = std::max(worst, std::abs(s1.volume - s2.volume));
            if (s1.interval.has_value() != s2.interval.has_value()) {
                worst = 1.0;
            } else if (s1.interval) {
                worst = std::max(worst, std::abs(s1.interval->first - s2.interval->first));
                worst = std::max(worst, std::abs(s1.interval->second - s2.interval->second));
            }
        }
    }
    return {worst <= kPeriodTol, fmt("max |f(phi) - f(phi + pi/2)| %.1e", worst)};
}

Outcome monogamy() {
    const auto rows = tr::monogamy_curve(tr::uniform_grid(kMonogamyGrid), 0.0);
    double min_res = 1e300;
    for (const auto& r : rows) min_res = std::min(min_res, r.residual);
    const double top = rows.back().residual;
    const double bottom = rows.front().residual;
    const bool ok = std::abs(top - 1.0) <= kResidualTol && std::abs(bottom) <= kResidualTol && min_res >= -kResidualTol;
    return {ok, fmt("res(1) %.12f res(0) %.1e min %.1e", top, bottom, min_res)};
}

Outcome oracle_validity(const tr::ZeroAnalysis& a, const tr::ImprovedBound& b) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> up(0.0, 1.0);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> size(2, 4);
    const Eigen::VectorXcd e1 = a.mixture.psi1.amplitudes();
    const Eigen::VectorXcd e2 = a.mixture.psi2.amplitudes();

    double worst_margin = 1e300;
    double worst_inside = 0.0;
    int inside = 0;
    for (int pi = 0; pi < kOracleP; ++pi) {
        const double p = up(rng);
        const double bound = b(p);
        const Eigen::VectorXcd u = std::sqrt(p) * e1;
        const Eigen::VectorXcd v = std::sqrt(1.0 - p) * e2;
        for (int trial = 0; trial < kOracleDecompositions; ++trial) {
            const int m = size(rng);
            // Random m x 2 isometry via Gram-Schmidt on two Gaussian columns.
            Eigen::VectorXcd c0(m);
            Eigen::VectorXcd c1(m);
            for (int k = 0; k < m; ++k) {
                c0[k] = tr::Complex(g(rng), g(rng));
                c1[k] = tr::Complex(g(rng), g(rng));
            }
            c0.normalize();
            c1 -= c0.dot(c1) * c0;
            c1.normalize();
            double avg = 0.0;
            for (int k = 0; k < m; ++k) {
                const tr::PureState s(3, Eigen::VectorXcd(c0[k] * u + c1[k] * v));
                avg += std::sqrt(std::abs(4.0 * tr::testing::hyperdet_oracle(s)));
            }
            worst_margin = std::min(worst_margin, avg - bound);
        }
        if (a.inside_zero_interval(p)) {
            ++inside;
            double avg = 0.0;
            for (const auto& c : a.zero_decomposition(p)) avg += c.weight * tr::c3(c.state);
            worst_inside = std::max(worst_inside, avg);
        }
    }
    const bool ok = worst_margin >= -kOracleSlack && worst_inside <= kZeroC3;
    return {ok, fmt("min(avg - bound) %.3e over %.0e decomps; %.0f p inside, witness avg c3 %.1e", worst_margin,
                    static_cast<double>(kOracleP) * kOracleDecompositions, inside, worst_inside)};
}

Outcome exactness(const tr::ZeroAnalysis& a) {
    const auto& iv = *a.interval;
    double worst_c3 = 0.0;
    double worst_rec = 0.0;
    for (int k = 0; k < kExactnessP; ++k) {
        const double p = iv.p_low + (k + 0.5) / kExactnessP * (iv.p_high - iv.p_low);
        const auto d = a.zero_decomposition(p);
        for (const auto& c : d) worst_c3 = std::max(worst_c3, tr::c3(c.state));
        worst_rec = std::max(worst_rec, recon_error(d, a.mixture, p));
    }
    return {worst_c3 <= kZeroC3 && worst_rec <= kReconTol, fmt("max c3 %.1e recon %.1e", worst_c3, worst_rec)};
}

void guarded(int id, const char* name, const std::function<Outcome()>& fn) {
    try {
        report(id, name, fn());
    } catch (const std::exception& e) {
        report(id, name, {false, std::string("exception: ") + e.what()});
    }
}

}  // namespace

int main() {
    const tr::ZeroAnalysis toy = tr::analyze_zeros(tr::toy_mixture());
    const tr::ImprovedBound bound = tr::improved_upper_bound(toy);

    guarded(1, "toy endpoint c3 closed forms", fig2_endpoints);
    guarded(2, "toy pencil roots and p0", [&] { return toy_roots(toy); });
    guarded(3, "toy zero interval and witnesses", [&] { return toy_interval(toy); });
    guarded(4, "characteristic-curve zeros", char_zeros);
    guarded(5, "beyond-linearization envelope", [&] { return beyond_linearization(bound); });
    guarded(6, "four-qubit closed forms", four_qubit_closed_forms);
    guarded(7, "zero-simplex dimension scan", simplex_scan);
    guarded(8, "phi threshold bracket", phi_threshold);
    guarded(9, "phi quarter-period invariance", periodicity);
    guarded(10, "extended monogamy residual", monogamy);
    guarded(11, "random-decomposition oracle", [&] { return oracle_validity(toy, bound); });
    guarded(12, "exactness of zero witnesses", [&] { return exactness(toy); });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
