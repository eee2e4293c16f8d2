#include "paramguide/correlations.hpp"

#include <algorithm>
#include <cmath>

#include "paramguide/errors.hpp"
#include "paramguide/parallel.hpp"
#include "paramguide/quadrature.hpp"
#include "paramguide/spectral_solver.hpp"

namespace paramguide {

namespace {

constexpr cplx I(0.0, 1.0);

quad::Options opts() {
    quad::Options o;
    o.rel_tol = 1e-12;
    o.abs_tol = 1e-300;
    o.initial_intervals = 8;
    return o;
}

void check_windows(const CorrelationWindows& w) {
    if (!(w.width >= 0.0)) throw InvalidParameterError("window width must be >= 0");
    if (w.width > 0.0 && w.lo() < 0.0)
        throw PreconditionError("TE window must lie at positive detuning, clear of its mirror");
}

// Kernel values at TE detuning nu. For the general path:
//   sig = T12 (signal), te = T11, tm = T22, cross = T11 conj(T21);
// all rescaled so |sig|^2/2pi is the signal density.
struct Kernels {
    double sig2, te2, tm2;
    cplx cross;
};

Kernels kernels_at(double nu, double L, const DeviceConfig& cfg, KernelPath path) {
    Kernels k;
    if (path == KernelPath::General) {
        Transfer2 t = transfer_closed_form(nu, L, cfg);
        k.sig2 = std::norm(t.t12);
        k.te2 = std::norm(t.t11);
        k.tm2 = std::norm(t.t22);
        k.cross = t.t11 * std::conj(t.t21);
        return k;
    }
    DispersionPoint p = dispersion_point(nu, cfg, false);
    double a = std::abs(p.kappa);
    double sn = (a * L < 1e-8) ? L : std::sin(a * L) / a;
    double cs = std::cos(a * L);
    double g = cfg.coupling_g;
    double decay = std::exp(-0.5 * cfg.loss_sum() * L);
    // g (e^{kL}K- - e^{-kL}K+) / 2|k| and (e^{kL} - e^{-kL}) / 2|k|
    cplx ke = cplx(-cs, -0.5 * p.D * sn);
    cplx km = cplx(cs, -0.5 * p.D * sn);
    cplx s = I * sn;
    k.sig2 = decay * decay * g * g * std::norm(s);
    k.te2 = decay * decay * std::norm(ke);
    k.tm2 = decay * decay * std::norm(km);
    k.cross = decay * decay * g * ke * std::conj(s);
    return k;
}

double band_integral(const CorrelationWindows& w, double L, const DeviceConfig& cfg,
                     KernelPath path, int which) {
    if (w.width == 0.0) return 0.0;
    auto r = quad::integrate<double>(
        [&](double nu) {
            Kernels k = kernels_at(nu, L, cfg, path);
            return which == 0 ? k.sig2 : which == 1 ? k.te2 : k.tm2;
        },
        w.lo(), w.hi(), opts());
    return r.value / units::two_pi;
}

cplx cross_integral(const CorrelationWindows& w, double L, double tau, const DeviceConfig& cfg,
                    KernelPath path) {
    if (w.width == 0.0) return 0.0;
    quad::Options o = opts();
    // resolve the delay oscillation up front
    int osc = static_cast<int>(std::ceil(std::abs(tau) * w.width / units::pi));
    o.initial_intervals = std::clamp(8 + osc, 8, 100000);
    auto r = quad::integrate<cplx>(
        [&](double nu) {
            return std::polar(1.0, -nu * tau) * kernels_at(nu, L, cfg, path).cross;
        },
        w.lo(), w.hi(), o);
    return r.value;
}

} // namespace

bool touches_noise_band(const CorrelationWindows& w, const DeviceConfig& cfg) {
    double thr = 10.0 * std::max(cfg.te.field_loss, cfg.tm.field_loss);
    double a = phase_mismatch_D(w.lo(), cfg), b = phase_mismatch_D(w.hi(), cfg);
    double mn = (a * b <= 0.0) ? 0.0 : std::min(std::abs(a), std::abs(b));
    return mn < thr;
}

double fluctuation_D(ModeLabel mode, const CorrelationWindows& w, double L,
                     const DeviceConfig& cfg, KernelPath path) {
    check_windows(w);
    if (cfg.coupling_g == 0.0 || w.width == 0.0) return 0.0;
    double q = band_integral(w, L, cfg, path, 0);
    return q * band_integral(w, L, cfg, path, mode == ModeLabel::TM ? 2 : 1);
}

double correlation_K(const CorrelationWindows& w, double L, double tau, const DeviceConfig& cfg,
                     KernelPath path) {
    check_windows(w);
    if (cfg.coupling_g == 0.0 || w.width == 0.0) return 0.0;
    return std::norm(cross_integral(w, L, tau, cfg, path)) / (units::two_pi * units::two_pi);
}

std::vector<CorrelationResult> theta_sweep(const CorrelationWindows& w, double L,
                                           const std::vector<double>& taus,
                                           const DeviceConfig& cfg, KernelPath path) {
    check_windows(w);
    CorrelationResult base;
    base.windows = w;
    base.noise_band_warning = touches_noise_band(w, cfg);
    if (cfg.coupling_g > 0.0 && w.width > 0.0) {
        base.Q_te = base.Q_tm = band_integral(w, L, cfg, path, 0);
        base.D_te = base.Q_te * band_integral(w, L, cfg, path, 1);
        base.D_tm = base.Q_tm * band_integral(w, L, cfg, path, 2);
    }
    double denom = std::sqrt(base.D_te * base.D_tm);
    std::vector<CorrelationResult> out(taus.size(), base);
    parallel_for(taus.size(), [&](size_t i) {
        CorrelationResult& r = out[i];
        r.tau = taus[i];
        if (w.width == 0.0 || cfg.coupling_g == 0.0) return;
        r.K = correlation_K(w, L, taus[i], cfg, path);
    });
    for (auto& r : out) {
        if (w.width == 0.0) {
            // zero-width limit: K and D_N shrink as width^2; take the ratio
            Kernels k = kernels_at(w.center, L, cfg, path);
            if (k.te2 * k.tm2 == 0.0)
                throw RangeError("correlation undefined: D_TE D_TM = 0");
            r.theta = std::norm(k.cross) / (k.sig2 * std::sqrt(k.te2 * k.tm2));
            continue;
        }
        if (!(denom > 0.0)) throw RangeError("correlation undefined: D_TE D_TM = 0");
        r.theta = r.K / denom;
    }
    return out;
}

CorrelationResult theta(const CorrelationWindows& w, double L, double tau,
                        const DeviceConfig& cfg, KernelPath path) {
    return theta_sweep(w, L, std::vector<double>{tau}, cfg, path).front();
}

} // namespace paramguide
