#include "tangleroof/zero_finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tangleroof/error.hpp"
#include "tangleroof/invariants.hpp"

namespace tangleroof {

namespace {

constexpr int kDegree = 4;
constexpr double kClusterTol = 1e-6;

bool all_real(const PureState& s) {
    return s.amplitudes().imag().cwiseAbs().maxCoeff() <= 1e-15;
}

Complex newton_step(const PencilPolynomial& poly, Complex z) {
    const Complex value = poly(z);
    const Complex slope = poly.derivative(z);
    if (std::abs(slope) <= 1e-300) return z;
    const Complex next = z - value / slope;
    return std::abs(poly(next)) < std::abs(value) ? next : z;
}

// Finite roots of c[lo] + ... + c[hi] z^(hi-lo) via companion eigenvalues.
std::vector<Complex> companion_roots(const std::array<Complex, 5>& c, int lo, int hi, bool real) {
    const int m = hi - lo;
    std::vector<Complex> roots;
    if (m <= 0) return roots;
    if (real) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
        for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < m; ++i) comp(i, m - 1) = -c[static_cast<std::size_t>(lo + i)].real() / c[static_cast<std::size_t>(hi)].real();
        Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
        for (Eigen::Index i = 0; i < m; ++i) roots.push_back(solver.eigenvalues()[i]);
    } else {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
        for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < m; ++i) comp(i, m - 1) = -c[static_cast<std::size_t>(lo + i)] / c[static_cast<std::size_t>(hi)];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
        for (Eigen::Index i = 0; i < m; ++i) roots.push_back(solver.eigenvalues()[i]);
    }
    return roots;
}

}  // namespace

Complex PencilPolynomial::operator()(Complex z) const {
    Complex acc = 0.0;
    for (int k = kDegree; k >= 0; --k) acc = acc * z + coefficients[static_cast<std::size_t>(k)];
    return acc;
}

Complex PencilPolynomial::derivative(Complex z) const {
    Complex acc = 0.0;
    for (int k = kDegree; k >= 1; --k) acc = acc * z + static_cast<double>(k) * coefficients[static_cast<std::size_t>(k)];
    return acc;
}

double PencilPolynomial::max_abs_coefficient() const {
    double out = 0.0;
    for (const auto& c : coefficients) out = std::max(out, std::abs(c));
    return out;
}

std::vector<double> ZeroSet::expanded_p0() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (int k = 0; k < roots[i].multiplicity; ++k) out.push_back(p0[i]);
    }
    return out;
}

PencilPolynomial pencil_polynomial(const PureState& psi1, const PureState& psi2) {
    if (psi1.n_qubits() != 3 || psi2.n_qubits() != 3) {
        throw Error(ErrorCode::invalid_argument, "pencil_polynomial needs 3-qubit states");
    }
    constexpr int nodes = kDegree + 1;
    std::array<Complex, nodes> omega{};
    std::array<Complex, nodes> values{};
    for (int j = 0; j < nodes; ++j) {
        omega[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / nodes);
        values[static_cast<std::size_t>(j)] = three_tangle(superpose(psi1, psi2, 1.0, omega[static_cast<std::size_t>(j)]));
    }

    PencilPolynomial poly{{}, psi1, psi2};
    const bool real = all_real(psi1) && all_real(psi2);
    for (int k = 0; k < nodes; ++k) {
        Complex acc = 0.0;
        for (int j = 0; j < nodes; ++j) {
            acc += values[static_cast<std::size_t>(j)] * std::conj(omega[static_cast<std::size_t>((j * k) % nodes)]);
        }
        acc /= static_cast<double>(nodes);
        poly.coefficients[static_cast<std::size_t>(k)] = real ? Complex(acc.real(), 0.0) : acc;
    }
    return poly;
}

std::vector<ExtendedRoot> polynomial_roots(const PencilPolynomial& poly, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "root tolerance must be positive");
    const double cmax = poly.max_abs_coefficient();
    if (cmax <= tol) {
        throw Error(ErrorCode::identically_zero, "pencil polynomial vanishes identically");
    }
    const auto& c = poly.coefficients;
    const auto significant = [&](int k) { return std::abs(c[static_cast<std::size_t>(k)]) > tol * cmax; };

    int hi = kDegree;
    while (hi > 0 && !significant(hi)) --hi;
    int lo = 0;
    while (lo < hi && !significant(lo)) ++lo;

    bool real = true;
    for (int k = lo; k <= hi; ++k) real = real && std::abs(c[static_cast<std::size_t>(k)].imag()) <= tol * cmax;

    std::vector<Complex> finite(static_cast<std::size_t>(lo), Complex(0.0, 0.0));
    std::vector<Complex> computed = companion_roots(c, lo, hi, real);

    // Two polishing passes on the full polynomial. In the real case each
    // conjugate pair is polished once and mirrored so pairs stay exact.
    for (std::size_t i = 0; i < computed.size(); ++i) {
        Complex& z = computed[i];
        if (real && z.imag() < 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) z = newton_step(poly, z);
        if (real && computed[i].imag() == 0.0) z = Complex(z.real(), 0.0);
    }
    if (real) {
        for (std::size_t i = 0; i < computed.size(); ++i) {
            if (computed[i].imag() >= 0.0) continue;
            // Partner: nearest root in the upper half plane by original pairing.
            double best = std::numeric_limits<double>::infinity();
            std::size_t partner = i;
            for (std::size_t j = 0; j < computed.size(); ++j) {
                if (computed[j].imag() <= 0.0) continue;
                const double d = std::abs(computed[j] - std::conj(computed[i]));
                if (d < best) {
                    best = d;
                    partner = j;
                }
            }
            if (partner != i) computed[i] = std::conj(computed[partner]);
        }
    }
    finite.insert(finite.end(), computed.begin(), computed.end());

    std::vector<ExtendedRoot> clustered;
    std::vector<Complex> sums;
    for (const Complex& z : finite) {
        bool merged = false;
        for (std::size_t k = 0; k < clustered.size(); ++k) {
            const double scale = std::max(1.0, std::abs(clustered[k].z));
            if (std::abs(clustered[k].z - z) <= kClusterTol * scale) {
                sums[k] += z;
                clustered[k].multiplicity += 1;
                clustered[k].z = sums[k] / static_cast<double>(clustered[k].multiplicity);
                merged = true;
                break;
            }
        }
        if (!merged) {
            clustered.push_back({z, false, 1});
            sums.push_back(z);
        }
    }
    std::sort(clustered.begin(), clustered.end(), [](const ExtendedRoot& a, const ExtendedRoot& b) {
        const double ma = std::abs(a.z);
        const double mb = std::abs(b.z);
        if (std::abs(ma - mb) > 1e-12 * std::max(1.0, ma)) return ma < mb;
        return std::arg(a.z) < std::arg(b.z);
    });
    if (hi < kDegree) clustered.push_back({Complex(0.0, 0.0), true, kDegree - hi});
    return clustered;
}

ZeroSet zero_set(const RankTwoMixture& mix, double tol) {
    if (mix.n_qubits() != 3) throw Error(ErrorCode::invalid_argument, "zero_set needs a 3-qubit mixture");
    ZeroSet out{pencil_polynomial(mix.psi1, mix.psi2), {}, {}, {}, {}};
    out.roots = polynomial_roots(out.polynomial, tol);
    for (const auto& root : out.roots) {
        double p0 = 0.0;
        double phase = 0.0;
        if (!root.at_infinity) {
            p0 = 1.0 / (1.0 + std::norm(root.z));
            phase = root.z == Complex(0.0, 0.0) ? 0.0 : std::arg(root.z);
        }
        out.p0.push_back(p0);
        out.phases.push_back(phase);
        out.states.push_back(mix.range_state(p0, phase));
    }
    return out;
}

}  // namespace tangleroof
