#include "tangleroof/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tangleroof/error.hpp"

namespace tangleroof {

Complex three_tangle(const PureState& psi) {
    if (psi.n_qubits() != 3) throw Error(ErrorCode::invalid_argument, "three_tangle needs a 3-qubit state");
    const auto& a = psi.amplitudes();
    const Complex a000 = a[0b000], a001 = a[0b001], a010 = a[0b010], a011 = a[0b011];
    const Complex a100 = a[0b100], a101 = a[0b101], a110 = a[0b110], a111 = a[0b111];

    const Complex d1 = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 +
                       a010 * a010 * a101 * a101 + a100 * a100 * a011 * a011;
    const Complex d2 = a000 * a111 * a011 * a100 + a000 * a111 * a101 * a010 +
                       a000 * a111 * a110 * a001 + a011 * a100 * a101 * a010 +
                       a011 * a100 * a110 * a001 + a101 * a010 * a110 * a001;
    const Complex d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    return 4.0 * (d1 - 2.0 * d2 + 4.0 * d3);
}

double c3(const PureState& psi) { return std::sqrt(std::abs(three_tangle(psi))); }

const InvariantSpec& three_tangle_spec() {
    static const InvariantSpec spec{"tau3", 4, [](const PureState& s) { return three_tangle(s); }};
    return spec;
}

double wootters_concurrence(const DensityMatrix& rho) {
    if (rho.n_qubits() != 2) throw Error(ErrorCode::invalid_argument, "concurrence needs a 4x4 density matrix");
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    // sigma_y (x) sigma_y in the computational basis: anti-diagonal (-1, 1, 1, -1).
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;

    const Eigen::Matrix4cd r = rho.entries();
    const Eigen::Matrix4cd flipped = yy * r.conjugate() * yy;

    // Eigenvalues of rho * flipped equal those of sqrt(rho) flipped sqrt(rho),
    // which is Hermitian and positive semidefinite.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> root_solver(r);
    const Eigen::Vector4d w = root_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd sqrt_rho = root_solver.eigenvectors() * w.asDiagonal() * root_solver.eigenvectors().adjoint();
    const Eigen::Matrix4cd product = sqrt_rho * flipped * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(product, Eigen::EigenvaluesOnly);

    std::array<double, 4> lambda{};
    for (int i = 0; i < 4; ++i) lambda[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, solver.eigenvalues()[i]));
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

double one_tangle(const PureState& psi, int cut) {
    if (cut < 0 || cut >= psi.n_qubits()) throw Error(ErrorCode::invalid_argument, "one_tangle: invalid qubit index");
    const int keep[] = {cut};
    const auto rho = partial_trace(psi, keep);
    const auto& m = rho.entries();
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    return std::clamp(4.0 * det, 0.0, 1.0);
}

}  // namespace tangleroof
