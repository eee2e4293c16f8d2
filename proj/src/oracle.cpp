#include "paramguide/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "paramguide/errors.hpp"
#include "paramguide/kernels.hpp"
#include "paramguide/parallel.hpp"

namespace paramguide::oracle {

namespace {

constexpr cplx I(0.0, 1.0);

// Coupled-mode generator for (a_TE(nu), a_TM^dagger(-nu)) with the common
// phase exp(i nu z (1/vTE + 1/vTM)/2) factored out. Built from the raw
// config only.
struct Generator {
    double d1, d2;    // diagonal imaginary parts
    double l1, l2;    // losses
    cplx g;
    double dk;

    Generator(double nu, const DeviceConfig& cfg) {
        double ie = 1.0 / cfg.te.group_velocity, im = 1.0 / cfg.tm.group_velocity;
        double mean = 0.5 * (ie + im);
        d1 = nu * (ie - mean);
        d2 = nu * (im - mean);
        l1 = cfg.te.field_loss;
        l2 = cfg.tm.field_loss;
        g = cfg.g();
        dk = cfg.dk;
    }

    Mat2 at(double z) const {
        cplx e = std::polar(1.0, -dk * z);
        return {cplx(-l1, d1), I * g * e, -I * std::conj(g) * std::conj(e), cplx(-l2, d2)};
    }

    double scale() const {
        return std::max({std::abs(d1) + l1, std::abs(d2) + l2, std::abs(g), std::abs(dk)});
    }
};

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 axpy(const Mat2& x, double h, const Mat2& k) {
    return {x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2], x[3] + h * k[3]};
}

Mat2 combine(const Mat2& y, double h, const Mat2& k1, const Mat2& k2, const Mat2& k3,
             const Mat2& k4) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return r;
}

double max_abs(const Mat2& m) {
    double v = 0.0;
    for (auto& x : m) v = std::max(v, std::abs(x));
    return v;
}

double max_diff(const Mat2& a, const Mat2& b) {
    double v = 0.0;
    for (int i = 0; i < 4; ++i) v = std::max(v, std::abs(a[i] - b[i]));
    return v;
}

// Backward sweep of Psi(xi) = T(L, xi): dPsi/dxi = -Psi A(xi), Psi(L) = I.
// Returns Psi at the n+1 nodes xi_j = j L / n.
std::vector<Mat2> backward_kernel(const Generator& gen, double L, int n) {
    std::vector<Mat2> out(n + 1);
    Mat2 psi = {1.0, 0.0, 0.0, 1.0};
    out[n] = psi;
    double h = L / n;
    for (int j = n; j > 0; --j) {
        double x = L * j / n;
        Mat2 a0 = gen.at(x), am = gen.at(x - 0.5 * h), a1 = gen.at(x - h);
        auto f = [](const Mat2& p, const Mat2& a) {
            Mat2 r = mul(p, a);
            for (auto& v : r) v = -v;
            return r;
        };
        Mat2 k1 = f(psi, a0);
        Mat2 k2 = f(axpy(psi, -0.5 * h, k1), am);
        Mat2 k3 = f(axpy(psi, -0.5 * h, k2), am);
        Mat2 k4 = f(axpy(psi, -h, k3), a1);
        psi = combine(psi, -h, k1, k2, k3, k4);
        out[j - 1] = psi;
    }
    return out;
}

double simpson(const std::vector<double>& y, double h) {
    int n = static_cast<int>(y.size()) - 1;
    std::vector<double> w(y.size());
    for (int j = 0; j <= n; ++j) {
        double c = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        w[j] = c * y[j];
    }
    return h / 3.0 * pairwise_sum(w.data(), w.size());
}

struct KernelIntegrals {
    double i11, i12, i21, i22;  // int |Psi_ij|^2 dxi
    Mat2 T;
};

KernelIntegrals kernel_integrals(const Generator& gen, double L, int n) {
    auto psi = backward_kernel(gen, L, n);
    std::vector<double> y11(n + 1), y12(n + 1), y21(n + 1), y22(n + 1);
    for (int j = 0; j <= n; ++j) {
        y11[j] = std::norm(psi[j][0]);
        y12[j] = std::norm(psi[j][1]);
        y21[j] = std::norm(psi[j][2]);
        y22[j] = std::norm(psi[j][3]);
    }
    double h = L / n;
    return {simpson(y11, h), simpson(y12, h), simpson(y21, h), simpson(y22, h), psi[0]};
}

} // namespace

Mat2 rk4_transfer(double nu, double z0, double z1, const DeviceConfig& cfg, int n) {
    if (n < 1) throw InvalidParameterError("rk4_transfer: need at least one step");
    Generator gen(nu, cfg);
    Mat2 y = {1.0, 0.0, 0.0, 1.0};
    double h = (z1 - z0) / n;
    for (int j = 0; j < n; ++j) {
        double z = z0 + (z1 - z0) * j / n;
        Mat2 a0 = gen.at(z), am = gen.at(z + 0.5 * h), a1 = gen.at(z + h);
        Mat2 k1 = mul(a0, y);
        Mat2 k2 = mul(am, axpy(y, 0.5 * h, k1));
        Mat2 k3 = mul(am, axpy(y, 0.5 * h, k2));
        Mat2 k4 = mul(a1, axpy(y, h, k3));
        y = combine(y, h, k1, k2, k3, k4);
    }
    double mean = 0.5 * (1.0 / cfg.te.group_velocity + 1.0 / cfg.tm.group_velocity);
    cplx p = std::polar(1.0, nu * mean * (z1 - z0));
    for (auto& v : y) v *= p;
    return y;
}

int default_steps(double nu, double L, const DeviceConfig& cfg) {
    Generator gen(nu, cfg);
    double need = std::ceil(L * gen.scale() / 0.002);
    int n = static_cast<int>(std::min(need, 4.0e6));
    n = std::max(n, 4096);
    return n + (n % 2);
}

TransferMatrix integrate_transfer(double nu, double L, const DeviceConfig& cfg, double step) {
    if (!(step > 0.0)) throw InvalidParameterError("integrate_transfer: step must be positive");
    TransferMatrix out;
    out.nu = nu;
    if (L == 0.0) {
        out.entries = {1.0, 0.0, 0.0, 1.0};
        return out;
    }
    int n = std::max(1, static_cast<int>(std::ceil(L / step - 1e-9)));
    Mat2 coarse = rk4_transfer(nu, 0.0, L, cfg, n);
    Mat2 fine = rk4_transfer(nu, 0.0, L, cfg, 2 * n);
    out.entries = fine;
    out.steps = 2 * n;
    out.error_estimate = max_diff(fine, coarse) / 15.0 / std::max(max_abs(fine), 1e-300);
    if (out.error_estimate > 1e-6)
        throw AccuracyError("integrate_transfer: Richardson estimate " +
                            std::to_string(out.error_estimate) + " exceeds 1e-6; reduce step");
    return out;
}

NoiseQuadrature noise_flux_quadrature(double nu, double L, const DeviceConfig& cfg, double n_T,
                                      int steps) {
    NoiseQuadrature out;
    if (L == 0.0) return out;
    double nte, ntm;
    if (n_T >= 0.0) {
        nte = ntm = n_T;
    } else {
        nte = thermal_occupation(cfg.te.omega + nu, cfg.temperature);
        ntm = thermal_occupation(cfg.tm.omega - nu, cfg.temperature);
    }
    Generator gen(nu, cfg);
    int n = steps > 0 ? steps + (steps % 2) : default_steps(nu, L, cfg);
    double ge = cfg.te.field_loss, gm = cfg.tm.field_loss;
    auto eval = [&](int m) {
        KernelIntegrals k = kernel_integrals(gen, L, m);
        double te = (gm * (ntm + 1.0) * k.i12 + ge * nte * k.i11) / units::pi;
        double tm = (ge * (nte + 1.0) * k.i21 + gm * ntm * k.i22) / units::pi;
        return std::pair<double, double>(te, tm);
    };
    auto c = eval(n);
    auto f = eval(2 * n);
    out.te = f.first + (f.first - c.first) / 15.0;
    out.tm = f.second + (f.second - c.second) / 15.0;
    double scale = std::max({std::abs(out.te), std::abs(out.tm), 1e-300});
    out.error_estimate =
        std::max(std::abs(f.first - c.first), std::abs(f.second - c.second)) / 15.0 / scale;
    return out;
}

double commutator_sum(double nu, double L, const DeviceConfig& cfg, int steps) {
    Generator gen(nu, cfg);
    int n = steps > 0 ? steps + (steps % 2) : default_steps(nu, L, cfg);
    auto eval = [&](int m) {
        KernelIntegrals k = kernel_integrals(gen, L, m);
        return std::norm(k.T[0]) - std::norm(k.T[1]) + 2.0 * cfg.te.field_loss * k.i11 -
               2.0 * cfg.tm.field_loss * k.i12;
    };
    double c = eval(n), f = eval(2 * n);
    return f + (f - c) / 15.0;
}

namespace {

// Linear combination sum_m (alpha_m e_m + beta_m e_m^dagger) of vacuum bin
// modes with [e_m, e_m^dagger] = 1.
struct LinOp {
    std::vector<double> ar, ai, br, bi;
    explicit LinOp(size_t n) : ar(n), ai(n), br(n), bi(n) {}
    LinOp dagger() const {
        LinOp d(ar.size());
        for (size_t m = 0; m < ar.size(); ++m) {
            d.ar[m] = br[m];
            d.ai[m] = -bi[m];
            d.br[m] = ar[m];
            d.bi[m] = -ai[m];
        }
        return d;
    }
};

// <0| X Y |0> = sum_m alpha^X_m beta^Y_m
cplx vac(const LinOp& x, const LinOp& y, kernels::Isa isa) {
    return kernels::dot(x.ar.data(), x.ai.data(), y.br.data(), y.bi.data(), x.ar.size(), isa);
}

} // namespace

std::vector<WickMoments> wick_fourth_moment(const Window& plus, const Window& minus, double L,
                                            const std::vector<double>& taus,
                                            const DeviceConfig& cfg, int bins) {
    if (bins < 1) throw InvalidParameterError("wick_fourth_moment: bins must be >= 1");
    if (!(plus.hi > plus.lo) || !(minus.hi > minus.lo))
        throw PreconditionError("wick_fourth_moment: windows must have positive width");
    if (plus.lo < minus.hi && minus.lo < plus.hi)
        throw PreconditionError("wick_fourth_moment: detection windows overlap");

    const size_t N = bins;
    double hp = plus.width() / N, hm = minus.width() / N;
    std::vector<double> nup(N), num(N);
    for (size_t j = 0; j < N; ++j) {
        nup[j] = plus.lo + (j + 0.5) * hp;
        num[j] = minus.lo + (j + 0.5) * hm;
    }
    // TM bins mirror TE bins exactly when the windows are mirror images;
    // then both windows share input modes and can correlate.
    double scale = std::max({std::abs(plus.lo), std::abs(plus.hi), 1.0});
    bool mirrored = std::abs(plus.lo + minus.hi) <= 1e-12 * scale &&
                    std::abs(plus.hi + minus.lo) <= 1e-12 * scale;

    // Input labels: [0, N) TE at nup, [N, 2N) TM at -nup,
    // [2N, 3N) TM at num, [3N, 4N) TE at -num (aliased when mirrored).
    const size_t M = mirrored ? 2 * N : 4 * N;
    auto tm_at_minus_nup = [&](size_t j) { return N + j; };
    auto tm_at_num = [&](size_t k) { return mirrored ? N + (N - 1 - k) : 2 * N + k; };
    auto te_at_minus_num = [&](size_t k) { return mirrored ? (N - 1 - k) : 3 * N + k; };

    std::vector<Mat2> Tp(N), Tm(N);
    parallel_for(N, [&](size_t j) {
        int n = default_steps(nup[j], L, cfg);
        Tp[j] = rk4_transfer(nup[j], 0.0, L, cfg, n);
        if (!mirrored) {
            int m = default_steps(-num[j], L, cfg);
            Tm[j] = rk4_transfer(-num[j], 0.0, L, cfg, m);
        }
    });
    if (mirrored)
        for (size_t k = 0; k < N; ++k) Tm[k] = Tp[N - 1 - k];

    kernels::Isa isa = kernels::active_isa();
    std::vector<WickMoments> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        // A_TE(tau) = sum_j sqrt(h/2pi) e^{-i nu_j tau} [T11 e_TE + T12 e_TM^dag]
        LinOp Ae(M), Am(M);
        for (size_t j = 0; j < N; ++j) {
            cplx w = std::sqrt(hp / units::two_pi) * std::polar(1.0, -nup[j] * tau);
            cplx a = w * Tp[j][0], b = w * Tp[j][1];
            size_t e = j, t = tm_at_minus_nup(j);
            Ae.ar[e] += a.real();
            Ae.ai[e] += a.imag();
            Ae.br[t] += b.real();
            Ae.bi[t] += b.imag();
        }
        // A_TM(0) = sum_k sqrt(h/2pi) [conj(T21) e_TE^dag + conj(T22) e_TM],
        // with T evaluated at the paired TE detuning -nu_k
        for (size_t k = 0; k < N; ++k) {
            double w = std::sqrt(hm / units::two_pi);
            cplx b = w * std::conj(Tm[k][2]), a = w * std::conj(Tm[k][3]);
            size_t t = tm_at_num(k), e = te_at_minus_num(k);
            Am.ar[t] += a.real();
            Am.ai[t] += a.imag();
            Am.br[e] += b.real();
            Am.bi[e] += b.imag();
        }
        LinOp Aed = Ae.dagger(), Amd = Am.dagger();

        // <X1 X2 X3 X4> by Wick's theorem, all three pairings
        auto four = [&](const LinOp& x1, const LinOp& x2, const LinOp& x3, const LinOp& x4) {
            return vac(x1, x2, isa) * vac(x3, x4, isa) + vac(x1, x3, isa) * vac(x2, x4, isa) +
                   vac(x1, x4, isa) * vac(x2, x3, isa);
        };
        WickMoments r;
        cplx ne = vac(Aed, Ae, isa), nm = vac(Amd, Am, isa);
        r.Q_te = ne.real();
        r.Q_tm = nm.real();
        // normal order with the TE pair innermost; without Langevin terms the
        // two band operators do not commute, so the other order is kept apart
        r.K = (four(Amd, Aed, Ae, Am) - ne * nm).real();
        r.K_flux_order = (four(Aed, Ae, Amd, Am) - ne * nm).real();
        r.D_te = (four(Aed, Ae, Aed, Ae) - ne * ne).real();
        r.D_tm = (four(Amd, Am, Amd, Am) - nm * nm).real();
        out.push_back(r);
    }
    return out;
}

WickMoments wick_fourth_moment(const Window& plus, const Window& minus, double L, double tau,
                               const DeviceConfig& cfg, int bins) {
    return wick_fourth_moment(plus, minus, L, std::vector<double>{tau}, cfg, bins).front();
}

} // namespace paramguide::oracle
