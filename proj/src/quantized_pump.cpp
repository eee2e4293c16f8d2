#include "paramguide/quantized_pump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "paramguide/errors.hpp"

namespace paramguide {

namespace {
constexpr cplx I(0.0, 1.0);
}

void BandGrid::validate() const {
    if (nu_values.empty()) throw InvalidParameterError("band grid is empty");
    if (!(band_width > 0.0)) throw InvalidParameterError("band width must be positive");
    size_t n = nu_values.size();
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(nu_values[i] + nu_values[n - 1 - i]) > 1e-9 * band_width)
            throw InvalidParameterError("band grid must be symmetric about 0");
        if (i > 0 && nu_values[i] - nu_values[i - 1] < band_width * (1.0 - 1e-9))
            throw InvalidParameterError("bands overlap");
    }
}

BandGrid BandGrid::symmetric(int count, double band_width) {
    if (count < 1) throw InvalidParameterError("band count must be >= 1");
    BandGrid g;
    g.band_width = band_width;
    g.total_width = count * band_width;
    g.Q0 = band_width / units::two_pi;
    g.nu_values.resize(count);
    for (int k = 0; k < count; ++k) g.nu_values[k] = (k - 0.5 * (count - 1)) * band_width;
    g.validate();
    return g;
}

double StateAmplitudes::norm() const {
    double s = std::norm(cp);
    for (auto& c : cw) s += std::norm(c);
    return s;
}

double band_detuning(double nu, const DeviceConfig& cfg) {
    return nu * (1.0 / cfg.tm.group_velocity - 1.0 / cfg.te.group_velocity);
}

Trajectory propagate_amplitudes(const BandGrid& grid, const DeviceConfig& cfg, double z_max,
                                int n_steps, const StateAmplitudes* init, int record_every,
                                kernels::Isa isa) {
    grid.validate();
    if (n_steps < 1) throw InvalidParameterError("n_steps must be >= 1");
    if (record_every < 1) record_every = 1;
    const size_t n = grid.nu_values.size();

    StateAmplitudes s0;
    s0.cw.assign(n, 0.0);
    if (init) {
        if (init->cw.size() != n)
            throw PreconditionError("initial state has the wrong number of bands");
        if (std::abs(init->norm() - 1.0) > 1e-12)
            throw PreconditionError("initial state is not normalized");
        s0 = *init;
        s0.z = 0.0;
    }

    std::vector<double> delta(n);
    double dmax = 0.0;
    for (size_t i = 0; i < n; ++i) {
        delta[i] = band_detuning(grid.nu_values[i], cfg);
        dmax = std::max(dmax, std::abs(delta[i]));
    }
    const cplx a = cfg.G() * std::sqrt(grid.Q0);  // G sqrt(Q0)
    double rate = dmax + std::abs(a) * std::sqrt(static_cast<double>(n));
    double H = z_max / n_steps;
    int sub = std::max(1, static_cast<int>(std::ceil(std::abs(H) * rate / 0.005)));
    double h = H / sub;

    // state: cp plus SoA band amplitudes
    std::vector<double> wr(n), wi(n), tr(n), ti(n), accr(n), acci(n);
    std::vector<double> kr(n), ki(n);
    for (size_t i = 0; i < n; ++i) {
        wr[i] = s0.cw[i].real();
        wi[i] = s0.cw[i].imag();
    }
    cplx cp = s0.cp;

    // derivative of (c, w): dc = -i conj(a) sum w ; dw = i delta w - i a c
    auto deriv = [&](cplx c, const double* xr, const double* xi, double* outr, double* outi) {
        cplx sw = kernels::sum(xr, xi, n, isa);
        kernels::band_rhs(xr, xi, delta.data(), -I * a * c, outr, outi, n, isa);
        return -I * std::conj(a) * sw;
    };

    Trajectory traj;
    traj.substeps = sub;
    double norm0 = s0.norm();
    auto record = [&](double z) {
        StateAmplitudes st;
        st.cp = cp;
        st.z = z;
        st.cw.resize(n);
        for (size_t i = 0; i < n; ++i) st.cw[i] = {wr[i], wi[i]};
        double nn = std::norm(cp) + kernels::norm_sq(wr.data(), wi.data(), n, isa);
        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(nn - norm0));
        traj.states.push_back(std::move(st));
    };
    record(0.0);

    for (int step = 1; step <= n_steps; ++step) {
        for (int s = 0; s < sub; ++s) {
            // k1
            cplx k1c = deriv(cp, wr.data(), wi.data(), kr.data(), ki.data());
            std::copy(wr.begin(), wr.end(), accr.begin());
            std::copy(wi.begin(), wi.end(), acci.begin());
            kernels::accumulate(accr.data(), acci.data(), kr.data(), ki.data(), h / 6.0, n, isa);
            cplx accc = cp + h / 6.0 * k1c;
            // k2
            kernels::axpy(wr.data(), wi.data(), kr.data(), ki.data(), 0.5 * h, tr.data(),
                          ti.data(), n, isa);
            cplx k2c = deriv(cp + 0.5 * h * k1c, tr.data(), ti.data(), kr.data(), ki.data());
            kernels::accumulate(accr.data(), acci.data(), kr.data(), ki.data(), h / 3.0, n, isa);
            accc += h / 3.0 * k2c;
            // k3
            kernels::axpy(wr.data(), wi.data(), kr.data(), ki.data(), 0.5 * h, tr.data(),
                          ti.data(), n, isa);
            cplx k3c = deriv(cp + 0.5 * h * k2c, tr.data(), ti.data(), kr.data(), ki.data());
            kernels::accumulate(accr.data(), acci.data(), kr.data(), ki.data(), h / 3.0, n, isa);
            accc += h / 3.0 * k3c;
            // k4
            kernels::axpy(wr.data(), wi.data(), kr.data(), ki.data(), h, tr.data(), ti.data(), n,
                          isa);
            cplx k4c = deriv(cp + h * k3c, tr.data(), ti.data(), kr.data(), ki.data());
            kernels::accumulate(accr.data(), acci.data(), kr.data(), ki.data(), h / 6.0, n, isa);
            accc += h / 6.0 * k4c;

            wr.swap(accr);
            wi.swap(acci);
            cp = accc;
        }
        if (step % record_every == 0 || step == n_steps) record(z_max * step / n_steps);
    }
    return traj;
}

TwoBandSolution two_band_closed_form(double delta, cplx G, double Q0, double z) {
    if (!(Q0 > 0.0)) throw InvalidParameterError("Q0 must be positive");
    TwoBandSolution s;
    double G2 = std::norm(G);
    double K2 = delta * delta + 2.0 * Q0 * G2;
    s.K_R = std::sqrt(K2);
    if (K2 == 0.0) {
        s.cp = 1.0;
        s.cw1 = s.cw2 = 0.0;
        return s;
    }
    double K = s.K_R;
    double sn = std::sin(K * z), cm1 = std::cos(K * z) - 1.0;
    cplx pre = -I * G * std::sqrt(Q0) / K;
    cplx b1(sn, -delta / K * cm1), b2(sn, delta / K * cm1);
    s.cw1 = pre * b1;
    s.cw2 = pre * b2;
    s.cp = delta * delta / K2 + 2.0 * Q0 * G2 / K2 * std::cos(K * z);
    s.phi_z = (std::abs(b1) > 0.0) ? std::arg(b2 / b1) : 0.0;
    return s;
}

BroadbandRegime broadband_regime(const DeviceConfig& cfg, double total_width) {
    if (!(total_width > 0.0)) throw InvalidParameterError("total width must be positive");
    BroadbandRegime r;
    double d = std::abs(1.0 / cfg.tm.group_velocity - 1.0 / cfg.te.group_velocity);
    double G = cfg.coupling_G;
    r.K_R = G * std::sqrt(total_width / units::two_pi);
    if (d == 0.0) {
        r.alpha = 0.0;
        r.regime = PumpRegime::Rabi;
        r.rate_or_K = r.K_R;
        return r;
    }
    r.alpha = (G > 0.0) ? std::sqrt(total_width) / G * d : std::numeric_limits<double>::infinity();
    r.kappa_half = G * G / (2.0 * d);
    r.kappa_full = G * G / d;
    if (r.alpha < 0.1) {
        r.regime = PumpRegime::Rabi;
        r.rate_or_K = r.K_R;
    } else if (r.alpha > 10.0) {
        r.regime = PumpRegime::Decay;
        r.rate_or_K = r.kappa_half;
    } else {
        r.regime = PumpRegime::Intermediate;
        r.rate_or_K = r.K_R;
    }
    return r;
}

DecayFit fit_decay_exponent(const std::vector<double>& z, const std::vector<double>& abs_cp) {
    if (z.size() != abs_cp.size() || z.size() < 3)
        throw InvalidParameterError("fit_decay_exponent: need matching z and |C_p| samples");
    for (size_t i = 1; i < abs_cp.size(); ++i)
        if (abs_cp[i] > abs_cp[i - 1] * (1.0 + 1e-9) + 1e-15)
            throw RegimeError("|C_p| is not monotone: oscillating (Rabi-like) regime, no decay fit");
    if (abs_cp.back() > std::exp(-1.0))
        throw RegimeError("trajectory too short: |C_p| never drops below 1/e");
    // fit window: after the initial transient, before numerical noise
    const double hi = std::exp(-0.2), lo = std::exp(-2.5);
    std::vector<double> xs, ys;
    for (size_t i = 0; i < z.size(); ++i)
        if (abs_cp[i] <= hi && abs_cp[i] >= lo) {
            xs.push_back(z[i]);
            ys.push_back(std::log(abs_cp[i]));
        }
    if (xs.size() < 3) {
        xs.clear();
        ys.clear();
        for (size_t i = 0; i < z.size(); ++i)
            if (abs_cp[i] > 0.0) {
                xs.push_back(z[i]);
                ys.push_back(std::log(abs_cp[i]));
            }
    }
    double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double res = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (my + slope * (xs[i] - mx));
        res += e * e;
    }
    DecayFit f;
    f.kappa = -slope;
    f.residual = std::sqrt(res / n);
    f.points = static_cast<int>(xs.size());
    return f;
}

DecayFit fit_decay_exponent(const Trajectory& t) {
    std::vector<double> z, a;
    for (auto& s : t.states) {
        z.push_back(s.z);
        a.push_back(std::abs(s.cp));
    }
    return fit_decay_exponent(z, a);
}

DecayFit fit_decay_exponent(const Trajectory& t, double alpha) {
    if (alpha < 10.0)
        throw RegimeError("decay fit needs alpha >= 10 (got " + std::to_string(alpha) + ")");
    return fit_decay_exponent(t);
}

cplx classical_g_from_pump_power(const DeviceConfig& cfg, double power) {
    if (!(power >= 0.0)) throw InvalidParameterError("pump power must be >= 0");
    double ve = cfg.te.group_velocity, vm = cfg.tm.group_velocity, vp = cfg.pump.group_velocity;
    // overlap integral per pump photon amplitude, then scaled by the classical
    // amplitude sqrt(photons per unit length)
    cplx A1 = cfg.G() * units::hbar * std::sqrt(ve * vm * vp);
    double amp = std::sqrt(power / (units::hbar * cfg.pump.omega * vp));
    return derive_g(A1 * amp, cfg.te, cfg.tm);
}

} // namespace paramguide
