#include "tangleroof/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tangleroof/error.hpp"

namespace tangleroof {

namespace {

std::size_t checked_dim(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 20) {
        throw Error(ErrorCode::invalid_argument,
                    "n_qubits must be in [1, 20], got " + std::to_string(n_qubits));
    }
    return std::size_t{1} << n_qubits;
}

std::size_t bits_to_index(std::string_view bits) {
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw Error(ErrorCode::invalid_argument, "bit string must contain only 0/1");
        }
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    return index;
}

std::vector<int> validated_keep(std::span<const int> keep, int n_qubits) {
    if (keep.empty()) {
        throw Error(ErrorCode::invalid_argument, "partial_trace: keep set is empty");
    }
    std::vector<int> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorCode::invalid_argument, "partial_trace: duplicate qubit index");
    }
    if (sorted.front() < 0 || sorted.back() >= n_qubits) {
        throw Error(ErrorCode::invalid_argument, "partial_trace: qubit index out of range");
    }
    return sorted;
}

// Splits a full basis index into (kept, traced) sub-indices, each keeping the
// relative qubit order.
struct IndexSplit {
    std::vector<std::size_t> kept;
    std::vector<std::size_t> traced;
};

IndexSplit split_indices(int n_qubits, const std::vector<int>& keep) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<bool> is_kept(static_cast<std::size_t>(n_qubits), false);
    for (int q : keep) is_kept[static_cast<std::size_t>(q)] = true;

    IndexSplit split{std::vector<std::size_t>(dim), std::vector<std::size_t>(dim)};
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t a = 0;
        std::size_t t = 0;
        for (int q = 0; q < n_qubits; ++q) {
            const std::size_t bit = (i >> (n_qubits - 1 - q)) & 1U;
            if (is_kept[static_cast<std::size_t>(q)]) {
                a = (a << 1) | bit;
            } else {
                t = (t << 1) | bit;
            }
        }
        split.kept[i] = a;
        split.traced[i] = t;
    }
    return split;
}

PureState canonical_phase(const Eigen::VectorXcd& v, int n_qubits) {
    double max_mag = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) max_mag = std::max(max_mag, std::abs(v[i]));
    if (max_mag == 0.0) return PureState(n_qubits, v);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= max_mag - 1e-12) {
            const Complex phase = std::conj(v[i]) / std::abs(v[i]);
            return PureState(n_qubits, Eigen::VectorXcd(v * phase));
        }
    }
    return PureState(n_qubits, v);
}

Eigen::Index leading_index(const Eigen::VectorXcd& v) {
    double max_mag = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) max_mag = std::max(max_mag, std::abs(v[i]));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= max_mag - 1e-12) return i;
    }
    return 0;
}

// Deterministic orthonormal basis of a two-dimensional eigenspace: built from
// the (basis independent) projector by picking the computational basis vector
// with the largest projection, twice, then ordered by leading amplitude index.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> canonical_pair(const Eigen::MatrixXcd& basis) {
    Eigen::MatrixXcd proj = basis * basis.adjoint();
    std::vector<Eigen::VectorXcd> picked;
    for (int round = 0; round < 2; ++round) {
        Eigen::Index best = 0;
        double best_val = -1.0;
        for (Eigen::Index i = 0; i < proj.rows(); ++i) {
            const double diag = proj(i, i).real();
            if (diag > best_val + 1e-9) {
                best_val = diag;
                best = i;
            }
        }
        Eigen::VectorXcd v = proj.col(best);
        v /= v.norm();
        picked.push_back(v);
        proj -= v * v.adjoint();
    }
    if (leading_index(picked[1]) < leading_index(picked[0])) std::swap(picked[0], picked[1]);
    return {picked[0], picked[1]};
}

}  // namespace

PureState::PureState(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    const std::size_t dim = checked_dim(n_qubits);
    if (static_cast<std::size_t>(amplitudes_.size()) != dim) {
        throw Error(ErrorCode::dimension_mismatch,
                    "expected " + std::to_string(dim) + " amplitudes, got " +
                        std::to_string(amplitudes_.size()));
    }
}

PureState::PureState(int n_qubits, std::span<const Complex> amplitudes)
    : PureState(n_qubits, Eigen::Map<const Eigen::VectorXcd>(amplitudes.data(),
                                                             static_cast<Eigen::Index>(amplitudes.size()))) {}

PureState PureState::basis(int n_qubits, std::size_t index) {
    const std::size_t dim = checked_dim(n_qubits);
    if (index >= dim) throw Error(ErrorCode::invalid_argument, "basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(n_qubits, std::move(v));
}

PureState PureState::basis(std::string_view bits) {
    return basis(static_cast<int>(bits.size()), bits_to_index(bits));
}

Complex PureState::amplitude(std::string_view bits) const {
    if (static_cast<int>(bits.size()) != n_qubits_) {
        throw Error(ErrorCode::dimension_mismatch, "bit string length differs from n_qubits");
    }
    return (*this)[bits_to_index(bits)];
}

bool PureState::is_normalized(double tol) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
}

PureState PureState::normalized() const {
    const double norm = amplitudes_.norm();
    if (norm == 0.0) throw Error(ErrorCode::invalid_argument, "cannot normalize the zero vector");
    return PureState(n_qubits_, Eigen::VectorXcd(amplitudes_ / norm));
}

PureState PureState::with_canonical_phase() const { return canonical_phase(amplitudes_, n_qubits_); }

PureState PureState::scaled(Complex factor) const {
    return PureState(n_qubits_, Eigen::VectorXcd(amplitudes_ * factor));
}

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd entries, double tol)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
    const auto dim = static_cast<Eigen::Index>(checked_dim(n_qubits));
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw Error(ErrorCode::dimension_mismatch, "density matrix must be 2^n x 2^n");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw Error(ErrorCode::invalid_argument, "density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace() - 1.0) > tol) {
        throw Error(ErrorCode::invalid_argument, "density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw Error(ErrorCode::invalid_argument, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::projector(const PureState& state) {
    return DensityMatrix(state.n_qubits(), state.amplitudes() * state.amplitudes().adjoint());
}

RankTwoMixture::RankTwoMixture(PureState psi1_in, PureState psi2_in, double weight)
    : psi1(std::move(psi1_in)), psi2(std::move(psi2_in)), p(weight) {
    if (psi1.n_qubits() != psi2.n_qubits()) {
        throw Error(ErrorCode::dimension_mismatch, "mixture components differ in qubit count");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_argument, "mixing weight outside [0, 1]");
    if (!psi1.is_normalized(1e-10) || !psi2.is_normalized(1e-10)) {
        throw Error(ErrorCode::invalid_argument, "mixture components must be normalized");
    }
    if (std::abs(inner_product(psi1, psi2)) > 1e-10) {
        throw Error(ErrorCode::invalid_argument, "mixture components must be orthogonal");
    }
}

Eigen::MatrixXcd RankTwoMixture::density_at(double weight) const {
    const auto& a = psi1.amplitudes();
    const auto& b = psi2.amplitudes();
    return weight * (a * a.adjoint()) + (1.0 - weight) * (b * b.adjoint());
}

PureState RankTwoMixture::range_state(double weight, double phase_angle) const {
    const double w = std::clamp(weight, 0.0, 1.0);
    return superpose(psi1, psi2, std::sqrt(w), std::polar(std::sqrt(1.0 - w), phase_angle));
}

PureState make_ghz(int n) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "GHZ requires n >= 2");
    const std::size_t dim = checked_dim(n);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v[0] = v[static_cast<Eigen::Index>(dim - 1)] = 1.0 / std::sqrt(2.0);
    return PureState(n, std::move(v));
}

PureState make_w(int n) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "W requires n >= 2");
    const std::size_t dim = checked_dim(n);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) v[Eigen::Index{1} << k] = amp;
    return PureState(n, std::move(v));
}

PureState superpose(const PureState& a, const PureState& b, Complex alpha, Complex beta) {
    if (a.n_qubits() != b.n_qubits()) {
        throw Error(ErrorCode::dimension_mismatch, "superpose: qubit counts differ");
    }
    return PureState(a.n_qubits(), Eigen::VectorXcd(alpha * a.amplitudes() + beta * b.amplitudes()));
}

Complex inner_product(const PureState& a, const PureState& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw Error(ErrorCode::dimension_mismatch, "inner_product: qubit counts differ");
    }
    return a.amplitudes().dot(b.amplitudes());
}

DensityMatrix partial_trace(const PureState& state, std::span<const int> keep) {
    const auto kept = validated_keep(keep, state.n_qubits());
    const auto split = split_indices(state.n_qubits(), kept);
    const int m = static_cast<int>(kept.size());
    const Eigen::Index rows = Eigen::Index{1} << m;
    const Eigen::Index cols = Eigen::Index{1} << (state.n_qubits() - m);

    Eigen::MatrixXcd reshaped = Eigen::MatrixXcd::Zero(rows, cols);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        reshaped(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.traced[i])) = state[i];
    }
    Eigen::MatrixXcd rho = reshaped * reshaped.adjoint();
    // Unnormalized inputs are reduced faithfully; validation happens on the
    // normalized trace.
    const double tr = rho.trace().real();
    if (tr <= 0.0) throw Error(ErrorCode::invalid_argument, "partial_trace of a zero state");
    return DensityMatrix(m, rho / tr, 1e-10);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const auto kept = validated_keep(keep, rho.n_qubits());
    const auto split = split_indices(rho.n_qubits(), kept);
    const int m = static_cast<int>(kept.size());
    const Eigen::Index rows = Eigen::Index{1} << m;

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, rows);
    const auto& e = rho.entries();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            if (split.traced[i] != split.traced[j]) continue;
            out(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.kept[j])) +=
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityMatrix(m, std::move(out), 1e-10);
}

RankTwoMixture rank_two_eigendecomposition(const DensityMatrix& rho, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "rank tolerance must be positive");
    const int n = rho.n_qubits();
    const Eigen::Index d = static_cast<Eigen::Index>(rho.dim());
    if (d < 2) throw Error(ErrorCode::invalid_argument, "rank-two decomposition needs dimension >= 2");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries());
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    const Eigen::MatrixXcd& vecs = solver.eigenvectors();

    int rank = 0;
    for (Eigen::Index i = 0; i < d; ++i) rank += ev[i] > tol ? 1 : 0;
    if (rank > 2) {
        throw Error(ErrorCode::rank_exceeded,
                    "numerical rank " + std::to_string(rank) + " exceeds two at tol " + std::to_string(tol));
    }

    const double top = ev[d - 1];
    const double second = ev[d - 2];

    if (rank <= 1) {
        RankTwoMixture mix(canonical_phase(vecs.col(d - 1), n), canonical_phase(vecs.col(d - 2), n), 1.0);
        mix.degenerate_rank = true;
        return mix;
    }

    const double weight = top / (top + second);
    if (std::abs(top - second) <= tol) {
        auto [v1, v2] = canonical_pair(vecs.rightCols(2));
        return RankTwoMixture(canonical_phase(v1, n), canonical_phase(v2, n), weight);
    }
    return RankTwoMixture(canonical_phase(vecs.col(d - 1), n), canonical_phase(vecs.col(d - 2), n), weight);
}

}  // namespace tangleroof
