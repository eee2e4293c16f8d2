#include "paramguide/spectral_solver.hpp"

#include <algorithm>
#include <cmath>

#include "paramguide/errors.hpp"
#include "paramguide/parallel.hpp"
#include "paramguide/quadrature.hpp"

namespace paramguide {

namespace {

constexpr cplx I(0.0, 1.0);

// sinh(kL)/k, continuous through k = 0
cplx sinhc(cplx k, double L) {
    cplx x = k * L;
    if (std::abs(x) < 1e-6) return L * (1.0 + x * x / 6.0);
    return std::sinh(x) / k;
}

double mean_inv_velocity(const DeviceConfig& cfg) {
    return 0.5 * (1.0 / cfg.te.group_velocity + 1.0 / cfg.tm.group_velocity);
}

// M_n = int_0^L s^n e^{-S s} ds
double moment(int n, double S, double L) {
    double x = S * L;
    double Ln1 = std::pow(L, n + 1);
    if (x == 0.0) return Ln1 / (n + 1);
    if (x > 600.0) return std::tgamma(n + 1.0) / std::pow(S, n + 1);
    double term = 1.0 / (n + 1), sum = term;
    for (int k = 0; k < 100000; ++k) {
        term *= x / (n + k + 2);
        sum += term;
        if (term < 1e-18 * sum && k > x) break;
    }
    return Ln1 * std::exp(-x) * sum;
}

// int_0^L e^{lambda s} ds
double expint_real(double lambda, double L) {
    if (lambda == 0.0) return L;
    return std::expm1(lambda * L) / lambda;
}

cplx expm1c(cplx z) {
    double x = z.real(), y = z.imag();
    double s = std::sin(0.5 * y);
    double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    double im = std::exp(x) * std::sin(y);
    return {re, im};
}

cplx expint_cplx(cplx lambda, double L) {
    if (lambda == 0.0) return L;
    return expm1c(lambda * L) / lambda;
}

// P(c)/(c/2)^2 and Q(c)/(c/2)^2 with c = 2a:
//   P(c) = int e^{-S s}(cosh cs - 1),  Q(c) = int e^{-S s}(1 - cos cs)
// Both tend to 2 M_2 as a -> 0.
double reduced_kernel(double a, double S, double L, bool hyperbolic) {
    double c = 2.0 * std::abs(a);
    double scale = (S > 0.0) ? std::min(L, 1.0 / S) : L;
    if (c * scale < 0.5) {
        double sum = 0.0, c2 = c * c, pw = 4.0;  // 4^n a^(2n-2) = c^(2n-2) * 4
        double fact = 2.0;                      // (2n)!
        for (int n = 1; n < 200; ++n) {
            double t = pw * moment(2 * n, S, L) / fact;
            if (!hyperbolic && (n % 2 == 0)) t = -t;
            sum += t;
            if (std::abs(t) < 1e-18 * std::abs(sum)) break;
            pw *= c2;
            fact *= (2.0 * n + 1.0) * (2.0 * n + 2.0);
        }
        return sum;
    }
    double e0 = expint_real(-S, L);
    double v;
    if (hyperbolic)
        v = 0.5 * (expint_real(c - S, L) + expint_real(-c - S, L)) - e0;
    else
        v = e0 - expint_cplx(cplx(-S, c), L).real();
    return v / (a * a);
}

} // namespace

cplx principal_sqrt(cplx z) {
    if (z.imag() == 0.0) {
        if (z.real() >= 0.0) return {std::sqrt(z.real()), 0.0};
        return {0.0, std::sqrt(-z.real())};
    }
    return std::sqrt(z);
}

DispersionPoint dispersion_point(double nu, const DeviceConfig& cfg, bool want_K) {
    DispersionPoint p;
    p.nu = nu;
    p.D = phase_mismatch_D(nu, cfg);
    cplx g = cfg.g();
    cplx X(p.D, cfg.loss_diff());
    p.kappa = principal_sqrt(std::norm(g) - 0.25 * X * X);
    cplx m(-0.5 * cfg.loss_sum(), nu * mean_inv_velocity(cfg));
    p.mu_plus = m + p.kappa;
    p.mu_minus = m - p.kappa;
    if (want_K) {
        if (g == 0.0)
            throw InvalidParameterError("K+- are undefined at g = 0 (division by zero)");
        cplx base = -X / (2.0 * g);
        p.K_plus = base - I * p.kappa / g;
        p.K_minus = base + I * p.kappa / g;
        p.has_K = true;
    }
    return p;
}

Transfer2 transfer_closed_form(double nu, double L, const DeviceConfig& cfg) {
    DispersionPoint p = dispersion_point(nu, cfg, false);
    cplx g = cfg.g();
    cplx X(p.D, cfg.loss_diff());
    cplx sc = sinhc(p.kappa, L);
    cplx ch = std::cosh(p.kappa * L);
    cplx em = std::exp(cplx(-0.5 * cfg.loss_sum() * L, nu * mean_inv_velocity(cfg) * L));
    cplx ph = std::polar(1.0, -0.5 * cfg.dk * L);
    cplx phc = std::conj(ph);
    Transfer2 t;
    t.t11 = ph * em * (ch + 0.5 * I * X * sc);
    t.t22 = phc * em * (ch - 0.5 * I * X * sc);
    t.t12 = ph * em * (I * g * sc);
    t.t21 = phc * em * (-I * std::conj(g) * sc);
    return t;
}

double signal_flux_density(double nu, double L, const DeviceConfig& cfg) {
    if (L < 0.0) throw InvalidParameterError("length must be >= 0");
    DispersionPoint p = dispersion_point(nu, cfg, false);
    double g2 = std::norm(cfg.g());
    if (g2 == 0.0 || L == 0.0) return 0.0;
    return std::exp(-cfg.loss_sum() * L) * g2 / units::two_pi * std::norm(sinhc(p.kappa, L));
}

NoiseKernel noise_kernel(cplx kappa, double loss_sum, double L) {
    NoiseKernel out;
    if (L == 0.0) return out;
    double a = kappa.real(), b = kappa.imag();
    double pa = reduced_kernel(a, loss_sum, L, true);
    double qb = reduced_kernel(b, loss_sum, L, false);
    double a2 = a * a, b2 = b * b;
    out.F = 2.0 * (a2 * pa + b2 * qb);
    if (a2 + b2 == 0.0)
        out.F_over_k2 = 4.0 * moment(2, loss_sum, L);
    else
        out.F_over_k2 = 2.0 * (a2 * pa + b2 * qb) / (a2 + b2);
    return out;
}

NoiseDensity noise_flux_density(double nu, double L, const DeviceConfig& cfg) {
    if (cfg.temperature > 0.0)
        throw UnsupportedError(
            "closed-form noise assumes a zero-temperature reservoir; use "
            "oracle::noise_flux_quadrature for T > 0");
    if (L < 0.0) throw InvalidParameterError("length must be >= 0");
    NoiseDensity n;
    double g2 = std::norm(cfg.g());
    if (g2 == 0.0 || L == 0.0) return n;
    DispersionPoint p = dispersion_point(nu, cfg, false);
    NoiseKernel k = noise_kernel(p.kappa, cfg.loss_sum(), L);
    double common = g2 / (4.0 * units::pi) * k.F_over_k2;
    n.te = cfg.tm.field_loss * common;
    n.tm = cfg.te.field_loss * common;
    return n;
}

AsymptoticValue asymptotic_flux_density(double nu, double L, const DeviceConfig& cfg,
                                        AsymptoticRegime regime) {
    AsymptoticValue out;
    double D = phase_mismatch_D(nu, cfg);
    double g = cfg.coupling_g, g2 = g * g;
    double decay = std::exp(-cfg.loss_sum() * L);
    double gmax = std::max(cfg.te.field_loss, cfg.tm.field_loss);
    double shape;
    if (regime == AsymptoticRegime::HighGain) {
        out.valid = g >= 10.0 * gmax;
        double k = std::sqrt(std::abs(g2 - 0.25 * D * D));
        if (k * L < 1e-6)
            shape = L * L;
        else if (std::abs(D) < 2.0 * g)
            shape = std::pow(std::sinh(k * L) / k, 2);
        else
            shape = std::pow(std::sin(k * L) / k, 2);
    } else {
        out.valid = cfg.loss_sum() * L <= 0.1;
        double k = 0.5 * std::abs(D);
        shape = (k * L < 1e-6) ? L * L : std::pow(std::sin(k * L) / k, 2);
    }
    out.value = decay * g2 / units::two_pi * shape;
    return out;
}

NondegenerateFlux nondegenerate_flux(double delta_k, double L, const DeviceConfig& cfg,
                                     double bandwidth) {
    NondegenerateFlux out;
    double x = 0.5 * delta_k * L;
    double sinc = (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    double q = bandwidth / units::two_pi * cfg.coupling_g * cfg.coupling_g * L * L * sinc * sinc;
    out.q_te = q;
    out.q_tm = q;
    out.valid = bandwidth * L * std::abs(cfg.inv_velocity_mismatch()) <= 0.1;
    return out;
}

NarrowbandGain narrowband_gain(double z, const DeviceConfig& cfg) {
    double x = cfg.coupling_g * z;
    double s = std::sinh(x), c = std::cosh(x);
    return {c * c, s * s, cfg.coupling_phase};
}

SpectralGrid default_grid(const DeviceConfig& cfg, double L) {
    double w = 1.5 * total_spdc_bandwidth(cfg, L);
    return SpectralGrid::uniform(-w, w, 2001);
}

namespace {

double closed_density(const DeviceConfig& cfg, double L, double nu, FluxComponent c) {
    if (c == FluxComponent::Signal) return signal_flux_density(nu, L, cfg);
    NoiseDensity n = noise_flux_density(nu, L, cfg);
    return c == FluxComponent::NoiseTE ? n.te : n.tm;
}

} // namespace

FluxSpectrum compute_spectrum(const DeviceConfig& cfg, double L, const SpectralGrid& grid,
                              bool with_noise) {
    grid.validate();
    if (with_noise && cfg.temperature > 0.0)
        throw UnsupportedError("closed-form noise spectrum requires T = 0");
    FluxSpectrum s;
    s.grid = grid;
    s.source = cfg;
    s.length = L;
    size_t n = grid.detunings.size();
    s.signal.assign(n, 0.0);
    s.noise_te.assign(n, 0.0);
    s.noise_tm.assign(n, 0.0);
    parallel_for(n, [&](size_t i) {
        double nu = grid.detunings[i];
        s.signal[i] = signal_flux_density(nu, L, cfg);
        if (with_noise) {
            NoiseDensity d = noise_flux_density(nu, L, cfg);
            s.noise_te[i] = d.te;
            s.noise_tm[i] = d.tm;
        }
    });
    if (n >= 2) {
        double lo = grid.detunings.front(), hi = grid.detunings.back();
        s.total_signal = integrate_band(s, lo, hi, FluxComponent::Signal);
        if (with_noise) {
            s.total_noise_te = integrate_band(s, lo, hi, FluxComponent::NoiseTE);
            s.total_noise_tm = integrate_band(s, lo, hi, FluxComponent::NoiseTM);
        }
    }
    return s;
}

double integrate_band(const FluxSpectrum& s, double nu_lo, double nu_hi, FluxComponent c) {
    const auto& x = s.grid.detunings;
    if (x.empty()) throw RangeError("empty spectrum");
    if (nu_lo > nu_hi) std::swap(nu_lo, nu_hi);
    double span = x.back() - x.front();
    double slack = 1e-12 * std::max(span, 1.0);
    if (nu_lo < x.front() - slack || nu_hi > x.back() + slack)
        throw RangeError("integration window lies outside the spectral grid");
    if (nu_lo == nu_hi) return 0.0;

    if (s.source) {
        const DeviceConfig& cfg = *s.source;
        double L = s.length;
        quad::Options opt;
        opt.rel_tol = 1e-11;
        opt.abs_tol = 1e-300;
        opt.initial_intervals = 16;
        auto r = quad::integrate<double>(
            [&](double nu) { return closed_density(cfg, L, nu, c); }, nu_lo, nu_hi, opt);
        return r.value;
    }

    const std::vector<double>& y = (c == FluxComponent::Signal)    ? s.signal
                                   : (c == FluxComponent::NoiseTE) ? s.noise_te
                                                                   : s.noise_tm;
    if (x.size() == 1) return 0.0;
    auto interp = [&](double v) {
        auto it = std::upper_bound(x.begin(), x.end(), v);
        size_t j = std::clamp<size_t>(it - x.begin(), 1, x.size() - 1);
        double t = (v - x[j - 1]) / (x[j] - x[j - 1]);
        return y[j - 1] + t * (y[j] - y[j - 1]);
    };
    // exact integral of the piecewise-linear interpolant, in grid order
    std::vector<double> pieces;
    double a = std::max(nu_lo, x.front()), b = std::min(nu_hi, x.back());
    double prev = a;
    for (size_t j = 0; j < x.size(); ++j) {
        if (x[j] <= a) continue;
        if (x[j] >= b) break;
        pieces.push_back(0.5 * (interp(prev) + interp(x[j])) * (x[j] - prev));
        prev = x[j];
    }
    pieces.push_back(0.5 * (interp(prev) + interp(b)) * (b - prev));
    return pairwise_sum(pieces.data(), pieces.size());
}

} // namespace paramguide
