#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tangleroof {

using Complex = std::complex<double>;

// Index convention for every state and matrix in this library: a basis
// index is a bit string with qubit 0 as the most significant bit, so for
// three qubits index 0b011 is |011> with qubit 0 in |0>.

class PureState {
public:
    PureState(int n_qubits, Eigen::VectorXcd amplitudes);
    PureState(int n_qubits, std::span<const Complex> amplitudes);

    // |b> for a computational basis index b.
    static PureState basis(int n_qubits, std::size_t index);
    // |bits> for a bit string such as "011".
    static PureState basis(std::string_view bits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

    Complex operator[](std::size_t index) const { return amplitudes_[static_cast<Eigen::Index>(index)]; }
    Complex amplitude(std::string_view bits) const;

    double norm_squared() const noexcept { return amplitudes_.squaredNorm(); }
    bool is_normalized(double tol = 1e-12) const noexcept;
    PureState normalized() const;

    // Global phase fixed so the largest-magnitude amplitude (first one on
    // ties) is real and positive.
    PureState with_canonical_phase() const;

    PureState scaled(Complex factor) const;

private:
    int n_qubits_;
    Eigen::VectorXcd amplitudes_;
};

class DensityMatrix {
public:
    // Validates Hermiticity and unit trace to `tol` and eigenvalues >= -1e-10.
    DensityMatrix(int n_qubits, Eigen::MatrixXcd entries, double tol = 1e-12);

    static DensityMatrix projector(const PureState& state);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    Complex trace() const { return entries_.trace(); }

private:
    int n_qubits_;
    Eigen::MatrixXcd entries_;
};

// rho(p) = p |psi1><psi1| + (1 - p) |psi2><psi2| with an orthonormal pair.
struct RankTwoMixture {
    RankTwoMixture(PureState psi1, PureState psi2, double p);

    PureState psi1;
    PureState psi2;
    double p;
    // Set when the source matrix had numerical rank one; psi2 is then an
    // arbitrary (but deterministic) kernel vector and p == 1.
    bool degenerate_rank = false;

    int n_qubits() const noexcept { return psi1.n_qubits(); }
    // rho at the stored weight.
    Eigen::MatrixXcd density() const { return density_at(p); }
    Eigen::MatrixXcd density_at(double weight) const;
    // sqrt(weight) psi1 + e^{i phase_angle} sqrt(1 - weight) psi2.
    PureState range_state(double weight, double phase_angle) const;
};

PureState make_ghz(int n);
PureState make_w(int n);

// alpha a + beta b, no normalization.
PureState superpose(const PureState& a, const PureState& b, Complex alpha, Complex beta);

// <a|b>, conjugate-linear in a.
Complex inner_product(const PureState& a, const PureState& b);

// Reduced state on `keep`; kept qubits appear in increasing index order.
DensityMatrix partial_trace(const PureState& state, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

inline constexpr double kDefaultRankTol = 1e-10;

// Larger eigenvalue first. Throws rank_exceeded above rank two.
RankTwoMixture rank_two_eigendecomposition(const DensityMatrix& rho, double tol = kDefaultRankTol);

}  // namespace tangleroof
