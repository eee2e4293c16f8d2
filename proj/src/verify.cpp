#include "paramguide/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "paramguide/correlations.hpp"
#include "paramguide/fock_ivp.hpp"
#include "paramguide/oracle.hpp"
#include "paramguide/quantized_pump.hpp"
#include "paramguide/spectral_solver.hpp"

namespace paramguide {

namespace {

double rel(double a, double b) {
    double d = std::abs(a - b);
    double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? d / s : d;
}

VerifyCase make(std::string family, double err, double tol, std::string note = {}) {
    return {std::move(family), err, tol, err <= tol, std::move(note)};
}

DeviceConfig random_device(std::mt19937_64& rng, double& L, double& nu) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DeviceConfig c = reference_device();
    c.te.group_velocity = 7.5e9 + 1.5e9 * u(rng);
    c.tm.group_velocity = 7.5e9 + 1.5e9 * u(rng);
    c.te.field_loss = 6.0 * u(rng);
    c.tm.field_loss = 6.0 * u(rng);
    c.coupling_g = 0.01 + 2.0 * u(rng);
    c.coupling_phase = units::two_pi * u(rng);
    c.dk = -5.0 + 10.0 * u(rng);
    L = 0.02 + 0.3 * u(rng);
    nu = (3.0 * u(rng) - 1.5) * total_spdc_bandwidth(c, L);
    return c;
}

} // namespace

bool VerifyReport::all_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const VerifyCase& c) { return c.pass; });
}

DecayAdjudication adjudicate_decay_exponent(int half_bands) {
    DeviceConfig cfg = reference_device();
    double d = std::abs(1.0 / cfg.tm.group_velocity - 1.0 / cfg.te.group_velocity);
    const double s = 0.05;  // band spacing in 1/cm of detuning
    cfg.coupling_G = std::sqrt(2.0 * d);
    cfg.coupling_phase = 0.0;
    BandGrid grid = BandGrid::symmetric(2 * half_bands + 1, s / d);
    BroadbandRegime reg = broadband_regime(cfg, grid.total_width);
    Trajectory t = propagate_amplitudes(grid, cfg, 3.0, 1500);
    DecayFit f = fit_decay_exponent(t, reg.alpha);

    DecayAdjudication a;
    a.kappa_fit = f.kappa;
    a.kappa_half = reg.kappa_half;
    a.kappa_full = reg.kappa_full;
    a.alpha = reg.alpha;
    a.bands = static_cast<int>(grid.nu_values.size());
    a.rel_err_half = std::abs(f.kappa - reg.kappa_half) / reg.kappa_half;
    a.rel_err_full = std::abs(f.kappa - reg.kappa_full) / reg.kappa_full;
    bool h = a.rel_err_half <= 0.02, full = a.rel_err_full <= 0.02;
    a.winner = (h && !full) ? "half" : (full && !h) ? "full" : "none";
    return a;
}

VerifyReport run_verify_suite() {
    VerifyReport rep;

    // closed-form spectra against the raw-ODE oracle
    {
        std::mt19937_64 rng(20240611);
        double es = 0.0, en = 0.0, ec = 0.0;
        for (int i = 0; i < 100; ++i) {
            double L, nu;
            DeviceConfig c = random_device(rng, L, nu);
            double s = signal_flux_density(nu, L, c);
            auto T = oracle::integrate_transfer(nu, L, c, L / oracle::default_steps(nu, L, c));
            es = std::max(es, rel(s, std::norm(T.entries[1]) / units::two_pi));
            NoiseDensity n = noise_flux_density(nu, L, c);
            auto q = oracle::noise_flux_quadrature(nu, L, c);
            en = std::max({en, rel(n.te, q.te), rel(n.tm, q.tm)});
            if (i % 5 == 0) ec = std::max(ec, std::abs(oracle::commutator_sum(nu, L, c) - 1.0));
        }
        rep.cases.push_back(make("signal_density_vs_oracle", es, 1e-8, "100 random devices"));
        rep.cases.push_back(make("noise_density_vs_oracle", en, 1e-8, "100 random devices"));
        rep.cases.push_back(make("commutator_preservation", ec, 1e-8, "20 random devices"));
    }

    // transfer entries
    {
        std::mt19937_64 rng(99);
        double e = 0.0;
        for (int i = 0; i < 20; ++i) {
            double L, nu;
            DeviceConfig c = random_device(rng, L, nu);
            Transfer2 t = transfer_closed_form(nu, L, c);
            auto T = oracle::integrate_transfer(nu, L, c, L / oracle::default_steps(nu, L, c));
            double m = std::max({std::abs(t.t11), std::abs(t.t12), std::abs(t.t21), std::abs(t.t22)});
            cplx ref[4] = {t.t11, t.t12, t.t21, t.t22};
            for (int k = 0; k < 4; ++k) e = std::max(e, std::abs(ref[k] - T.entries[k]) / m);
        }
        rep.cases.push_back(make("transfer_matrix_vs_oracle", e, 1e-8));
    }

    // correlation moments against the discretized Wick computation
    {
        DeviceConfig c = reference_device();
        double e = 0.0;
        for (double width : {0.3, 3.0}) {
            CorrelationWindows w{units::thz_to_rad(6.0), units::thz_to_rad(width)};
            std::vector<double> taus = {0.0, 0.2e-12, 1.0e-12};
            auto ref = oracle::wick_fourth_moment({w.lo(), w.hi()}, {-w.hi(), -w.lo()}, 0.1, taus,
                                                  c, 4096);
            double dte = fluctuation_D(ModeLabel::TE, w, 0.1, c);
            double dtm = fluctuation_D(ModeLabel::TM, w, 0.1, c);
            for (size_t i = 0; i < taus.size(); ++i) {
                double k = correlation_K(w, 0.1, taus[i], c);
                double scale = std::max(ref[0].K, 1e-300);
                e = std::max({e, std::abs(k - ref[i].K) / scale, rel(dte, ref[i].D_te),
                              rel(dtm, ref[i].D_tm)});
            }
        }
        rep.cases.push_back(make("correlation_vs_wick", e, 1e-6, "K error relative to K(0)"));
    }

    // Manley-Rowe
    {
        DeviceConfig c = reference_device();
        double e = 0.0;
        for (double dk : {-3.0, 0.0, 1.7}) {
            auto f = nondegenerate_flux(dk, 0.05, c, units::thz_to_rad(0.01));
            e = std::max(e, rel(f.q_te, f.q_tm));
        }
        rep.cases.push_back(make("manley_rowe", e, 0.0));
    }

    // two-band quantized pump
    {
        DeviceConfig c = reference_device();
        BandGrid g = BandGrid::symmetric(2, units::thz_to_rad(1.0));
        double e = 0.0;
        for (bool matched : {true, false}) {
            DeviceConfig cc = c;
            if (matched) cc.tm.group_velocity = cc.te.group_velocity;
            double delta = band_detuning(g.nu_values[1], cc);
            double K = std::sqrt(delta * delta + 2.0 * g.Q0 * std::norm(cc.G()));
            double zmax = 2.0 * units::pi / K;
            Trajectory t = propagate_amplitudes(g, cc, zmax, 200);
            for (auto& st : t.states) {
                auto cf = two_band_closed_form(delta, cc.G(), g.Q0, st.z);
                e = std::max({e, std::abs(st.cp - cf.cp), std::abs(st.cw[1] - cf.cw1),
                              std::abs(st.cw[0] - cf.cw2)});
            }
        }
        rep.cases.push_back(make("two_band_ode_vs_closed_form", e, 1e-9, "absolute"));
    }

    // norm conservation over 1e4 steps
    {
        DeviceConfig c = reference_device();
        double d = std::abs(c.inv_velocity_mismatch());
        c.coupling_G = std::sqrt(2.0 * d);
        BandGrid g = BandGrid::symmetric(101, 0.05 / d);
        Trajectory t = propagate_amplitudes(g, c, 5.0, 10000, nullptr, 100);
        rep.cases.push_back(make("qpump_norm_conservation", t.max_norm_drift, 1e-10, "1e4 steps"));
    }

    // Fock evolution against the two-mode squeezing law
    {
        double e = 0.0;
        for (double r : {0.1, 0.5, 1.0}) {
            cplx z = std::polar(r, 0.4);
            PairState p = evolve_pair(z, kDefaultNmax);
            auto ref = two_mode_squeezed_amplitudes(z, kDefaultNmax);
            for (int n = 0; n <= kDefaultNmax; ++n) e = std::max(e, std::abs(p.amplitudes[n] - ref[n]));
        }
        rep.cases.push_back(make("fock_tanh_law", e, 1e-10, "absolute"));
        MultiPairState st = multi_pair_state({0.3, std::polar(0.3, 1.0)}, 20);
        int rank = schmidt_rank_check(st, 2).rank;
        rep.cases.push_back(make("fock_pair_factorization", std::abs(rank - 1), 0.0, "Schmidt rank"));
    }

    rep.decay = adjudicate_decay_exponent();
    rep.cases.push_back(make("decay_exponent_adjudication",
                             std::min(rep.decay.rel_err_half, rep.decay.rel_err_full), 0.02,
                             "winner: " + rep.decay.winner));
    if (rep.decay.winner == "none") rep.cases.back().pass = false;
    return rep;
}

} // namespace paramguide
