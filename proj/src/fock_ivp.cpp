#include "paramguide/fock_ivp.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "paramguide/errors.hpp"

namespace paramguide {

namespace {
constexpr cplx I(0.0, 1.0);

int suggest_nmax(double r, double tol) {
    double t = std::tanh(r);
    if (t <= 0.0) return 8;
    // leak = t^{2(N+1)}
    double n = std::log(tol) / (2.0 * std::log(t)) - 1.0;
    return std::max(8, static_cast<int>(std::ceil(n * 1.2)) + 4);
}
} // namespace

std::vector<cplx> two_mode_squeezed_amplitudes(cplx zeta, int n_max) {
    if (n_max < 0) throw InvalidParameterError("n_max must be >= 0");
    double r = std::abs(zeta);
    cplx q = I * std::polar(std::tanh(r), std::arg(zeta));
    std::vector<cplx> c(n_max + 1);
    c[0] = 1.0 / std::cosh(r);
    for (int n = 1; n <= n_max; ++n) c[n] = c[n - 1] * q;
    return c;
}

PairState evolve_pair(cplx zeta, int n_max, double leak_tolerance) {
    if (n_max < 8) throw InvalidParameterError("n_max must be >= 8");
    if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()))
        throw InvalidParameterError("squeeze argument must be finite");
    // Evolve in a padded ladder so the retained levels do not feel the wall.
    const int dim = 2 * n_max + 1;
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        gen(n + 1, n) = I * zeta * double(n + 1);
        gen(n, n + 1) = I * std::conj(zeta) * double(n + 1);
    }
    Eigen::MatrixXcd U = gen.exp();
    PairState s;
    s.squeeze_arg = zeta;
    s.amplitudes.resize(n_max + 1);
    double sum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        s.amplitudes[n] = U(n, 0);
        sum += std::norm(U(n, 0));
    }
    s.leak = std::max(0.0, 1.0 - sum);
    if (s.leak > leak_tolerance) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", s.leak);
        throw TruncationError(std::string("Fock truncation leak ") + buf +
                              " exceeds tolerance; try n_max >= " +
                              std::to_string(suggest_nmax(std::abs(zeta), leak_tolerance)));
    }
    return s;
}

Eigen::VectorXcd MultiPairState::assemble() const {
    Eigen::VectorXcd v(1);
    v(0) = 1.0;
    for (auto& p : pairs_) {
        const auto& c = p.amplitudes;
        Eigen::VectorXcd w(v.size() * c.size());
        for (Eigen::Index i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) w(i * c.size() + j) = v(i) * c[j];
        v.swap(w);
    }
    return v;
}

MultiPairState multi_pair_state(const std::vector<cplx>& couplings, int n_max) {
    std::vector<PairState> pairs;
    pairs.reserve(couplings.size());
    for (auto z : couplings) pairs.push_back(evolve_pair(z, n_max));
    return MultiPairState(std::move(pairs));
}

SchmidtResult schmidt_decomposition(const Eigen::MatrixXcd& amplitudes, double threshold) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(amplitudes);
    SchmidtResult r;
    auto sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        r.singular_values.push_back(sv(i));
        if (sv(i) > threshold) ++r.rank;
    }
    return r;
}

SchmidtResult schmidt_rank_check(const MultiPairState& state, int mode_boundary,
                                 double threshold) {
    const int modes = 2 * static_cast<int>(state.size());
    if (mode_boundary <= 0 || mode_boundary >= modes)
        throw InvalidParameterError("cut must lie strictly between modes");
    if (mode_boundary % 2 != 0)
        throw InvalidParameterError("invalid cut: boundary " + std::to_string(mode_boundary) +
                                    " splits a pair");
    std::size_t left_pairs = mode_boundary / 2;
    Eigen::Index left = 1, right = 1;
    for (std::size_t k = 0; k < state.size(); ++k) {
        Eigen::Index d = static_cast<Eigen::Index>(state.pair(k).amplitudes.size());
        (k < left_pairs ? left : right) *= d;
    }
    Eigen::VectorXcd v = state.assemble();
    Eigen::MatrixXcd m(left, right);
    for (Eigen::Index i = 0; i < left; ++i)
        for (Eigen::Index j = 0; j < right; ++j) m(i, j) = v(i * right + j);
    return schmidt_decomposition(m, threshold);
}

SchmidtResult pair_internal_schmidt(const PairState& pair, double threshold) {
    const Eigen::Index d = static_cast<Eigen::Index>(pair.amplitudes.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) m(n, n) = pair.amplitudes[n];
    return schmidt_decomposition(m, threshold);
}

Eigen::Matrix2cd first_order_two_pair(cplx zeta_a, cplx zeta_b) {
    double nrm = std::sqrt(std::norm(zeta_a) + std::norm(zeta_b));
    if (nrm == 0.0) throw InvalidParameterError("both couplings vanish");
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(1, 0) = I * zeta_a / nrm;  // pair A excited, pair B empty
    m(0, 1) = I * zeta_b / nrm;
    return m;
}

} // namespace paramguide
