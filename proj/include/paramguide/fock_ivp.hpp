#pragma once

#include <vector>

#include <Eigen/Dense>

#include "paramguide/units.hpp"

namespace paramguide {

// Amplitudes C_n over correlated Fock states |n_V, n_H>, n = 0..N_max.
struct PairState {
    std::vector<cplx> amplitudes;
    cplx squeeze_arg = 0.0;  // M t / hbar
    double leak = 0.0;       // 1 - sum |C_n|^2

    int n_max() const { return static_cast<int>(amplitudes.size()) - 1; }
};

constexpr int kDefaultNmax = 60;
constexpr double kDefaultLeakTolerance = 1e-9;

// psi = exp(i (zeta a^dag b^dag + conj(zeta) a b)) |0,0>, zeta = M t / hbar.
PairState evolve_pair(cplx zeta, int n_max = kDefaultNmax,
                      double leak_tolerance = kDefaultLeakTolerance);

// C_n = (i e^{i arg zeta} tanh r)^n / cosh r, r = |zeta|
std::vector<cplx> two_mode_squeezed_amplitudes(cplx zeta, int n_max);

// Independent pairs; only per-pair access, the joint state is a product by construction.
class MultiPairState {
public:
    explicit MultiPairState(std::vector<PairState> pairs) : pairs_(std::move(pairs)) {}
    std::size_t size() const { return pairs_.size(); }
    const PairState& pair(std::size_t k) const { return pairs_.at(k); }
    // Joint amplitude over pair occupations, pair 0 most significant.
    Eigen::VectorXcd assemble() const;

private:
    std::vector<PairState> pairs_;
};

MultiPairState multi_pair_state(const std::vector<cplx>& couplings, int n_max = kDefaultNmax);

struct SchmidtResult {
    int rank = 0;
    std::vector<double> singular_values;  // descending
};

// Rank of a bipartite amplitude matrix, counted above threshold.
SchmidtResult schmidt_decomposition(const Eigen::MatrixXcd& amplitudes, double threshold = 1e-10);

// Mode boundaries are numbered along V0 H0 V1 H1 ...; boundary b separates the
// first b modes from the rest. Odd b cuts inside a pair and is rejected.
SchmidtResult schmidt_rank_check(const MultiPairState& state, int mode_boundary,
                                 double threshold = 1e-10);

// Schmidt decomposition across the V|H cut of one pair.
SchmidtResult pair_internal_schmidt(const PairState& pair, double threshold = 1e-10);

// First-order two-pair state with the vacuum dropped, as amplitudes over
// {|1,0>, |0,1>} of (pair A, pair B): i zeta_A |1_A 0_B> + i zeta_B |0_A 1_B>, normalized.
Eigen::Matrix2cd first_order_two_pair(cplx zeta_a, cplx zeta_b);

} // namespace paramguide
