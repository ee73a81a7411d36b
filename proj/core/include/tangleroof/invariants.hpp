#pragma once

#include <functional>
#include <string>

#include "tangleroof/state.hpp"

namespace tangleroof {

// A homogeneous polynomial invariant: evaluator(lambda psi) equals
// lambda^homogeneous_degree * evaluator(psi).
struct InvariantSpec {
    std::string name;
    int homogeneous_degree;
    std::function<Complex(const PureState&)> evaluator;
};

// Three-qubit hyperdeterminant with the factor 4 that makes tau3(GHZ3) = 1:
// tau3 = 4 (d1 - 2 d2 + 4 d3). Returned as the complex polynomial value; the
// input does not have to be normalized.
Complex three_tangle(const PureState& psi);

// sqrt(|tau3|).
double c3(const PureState& psi);

const InvariantSpec& three_tangle_spec();

// Two-qubit concurrence max(0, l1 - l2 - l3 - l4) with l_i the decreasing
// square roots of the eigenvalues of rho (sy x sy) rho^* (sy x sy).
double wootters_concurrence(const DensityMatrix& rho);

// 4 det(rho_k) for the single-qubit reduction of qubit `cut`.
double one_tangle(const PureState& psi, int cut);

}  // namespace tangleroof
