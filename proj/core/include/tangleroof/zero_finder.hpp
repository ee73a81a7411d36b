#pragma once

#include <array>
#include <vector>

#include "tangleroof/state.hpp"

namespace tangleroof {

// P(z) = tau3(psi1 + z psi2) = sum_k coefficients[k] z^k.
struct PencilPolynomial {
    std::array<Complex, 5> coefficients{};
    PureState psi1;
    PureState psi2;

    Complex operator()(Complex z) const;
    Complex derivative(Complex z) const;
    double max_abs_coefficient() const;
};

struct ExtendedRoot {
    Complex z{};
    bool at_infinity = false;
    int multiplicity = 1;
};

// One entry per distinct root; p0, phases and states are aligned with roots.
struct ZeroSet {
    PencilPolynomial polynomial;
    std::vector<ExtendedRoot> roots;
    std::vector<double> p0;
    std::vector<double> phases;
    std::vector<PureState> states;

    std::size_t size() const noexcept { return roots.size(); }
    // p0 repeated by multiplicity; always four entries.
    std::vector<double> expanded_p0() const;
};

inline constexpr double kDefaultRootTol = 1e-10;

// Coefficients from tau3 at the five fifth roots of unity (an exactly
// invertible Vandermonde system, solved as an inverse DFT).
PencilPolynomial pencil_polynomial(const PureState& psi1, const PureState& psi2);

// Exactly four roots counted with multiplicity, roots at infinity included.
// Throws Error(identically_zero) when every coefficient is below tol.
std::vector<ExtendedRoot> polynomial_roots(const PencilPolynomial& poly, double tol = kDefaultRootTol);

// Throws Error(identically_zero) when the whole pencil consists of zeros.
ZeroSet zero_set(const RankTwoMixture& mix, double tol = kDefaultRootTol);

}  // namespace tangleroof
