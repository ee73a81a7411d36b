#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tangleroof/roof_bounds.hpp"
#include "tangleroof/state.hpp"

namespace tangleroof {

// Toy pair psi_pm = (GHZ3 +- W3) / sqrt(2), psi1 = psi_+.
RankTwoMixture toy_mixture(double p = 0.5);

struct ToyReport {
    ZeroAnalysis analysis;
    Decomposition low_witness;
    Decomposition high_witness;
    BoundCurve linearized;
    ImprovedBound improved;
};

ToyReport toy_report(const ImprovedBoundOptions& options = {});

// sqrt(p) GHZ4 - sqrt(1 - p) e^{i phi} W4.
PureState four_qubit_state(double p, double phi);

// Larger eigenvalue of the three-qubit reduction: (2 + sqrt(1 - p^2)) / 4.
double q_of_p(double p);

struct ClosedFormCoefficients {
    double f1, g1, h1;
    double f2, g2, h2;
};

// Real coefficient functions on (0, 1); g2 carries sign(3 - 5p) with
// sign(0) = +1.
ClosedFormCoefficients closed_form_coefficients(double p);

// f e^{-i phi}|111> - g|000> + h e^{i phi}|W3> for both eigenvectors.
std::pair<PureState, PureState> closed_form_eigenstates(double p, double phi);

// Reduction of Psi4(p, phi) to qubits `keep`, eigendecomposed. The default
// keeps qubits 0, 1, 2; at p = 0 and p = 1 the explicit limits are returned.
RankTwoMixture reduced_mixture(double p, double phi, double tol_rank = kDefaultRankTol);
RankTwoMixture reduced_mixture(double p, double phi, std::span<const int> keep, double tol_rank = kDefaultRankTol);

struct SimplexSample {
    double p = 0.0;
    double volume = 0.0;
    int dimension = 0;
    bool identically_zero = false;
    std::optional<std::pair<double, double>> interval;
};

struct ScanOptions {
    double tol_rank = kDefaultRankTol;
    double tol_root = kDefaultRootTol;
    int parallelism = 1;
};

SimplexSample simplex_sample(double p, double phi, const ScanOptions& options = {});
std::vector<SimplexSample> simplex_scan(double phi, std::span<const double> p_grid, const ScanOptions& options = {});

// Location of an isolated interior p where the simplex volume vanishes while
// it is positive on either side, searched on `p_grid` and refined to a
// volume below 1e-7.
std::optional<double> interior_volume_zero(double phi, std::span<const double> p_grid, const ScanOptions& options = {});

struct ThresholdSample {
    double phi = 0.0;
    bool has_interior_volume_zero = false;
};

std::vector<ThresholdSample> phi_threshold_scan(std::span<const double> phi_grid, std::span<const double> p_grid,
                                                const ScanOptions& options = {});

// Bisects [lo, hi] (crossing present at lo, absent at hi) down to `width`.
std::pair<double, double> phi_threshold_bracket(double lo, double hi, std::span<const double> p_grid,
                                                double width = 1e-3, const ScanOptions& options = {});

struct MonogamyReport {
    double p = 0.0;
    double phi = 0.0;
    double one_tangle = 0.0;
    std::array<double, 3> pairwise{};
    std::array<double, 3> three_tangle_bounds{};
    double residual = 0.0;
};

// Residual tau(0|123) - sum_j C^2(0j) - sum_{j<k} C3hat^2(0jk), where C3hat
// is the linearized bound of the rank-two reduction at its own weight.
MonogamyReport monogamy_report(double p, double phi, const ScanOptions& options = {});
std::vector<MonogamyReport> monogamy_curve(std::span<const double> p_grid, double phi, const ScanOptions& options = {});

struct ZeroCheck {
    bool zero = false;
    Decomposition witness;
    double reconstruction_error = 0.0;
    double max_c3 = 0.0;
};

// Three-qubit reduction of p GHZ4 + (1 - p) W4 split into |000>, |111>, W3
// and |000> components.
ZeroCheck ghzw_mixture_zero_check(double p);

}  // namespace tangleroof
