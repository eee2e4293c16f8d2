#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "paramguide/errors.hpp"
#include "paramguide/quantized_pump.hpp"

using namespace paramguide;

namespace {

constexpr cplx I(0.0, 1.0);

// Independent oracle: exact exponential of the (1 + n)-level amplitude generator.
Eigen::VectorXcd amplitude_oracle(const BandGrid& g, const DeviceConfig& c, double z) {
    const int n = static_cast<int>(g.nu_values.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    cplx a = c.G() * std::sqrt(g.Q0);
    for (int k = 0; k < n; ++k) {
        A(0, k + 1) = -I * std::conj(a);
        A(k + 1, 0) = -I * a;
        A(k + 1, k + 1) = I * g.nu_values[k] * (1.0 / c.tm.group_velocity - 1.0 / c.te.group_velocity);
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n + 1);
    v(0) = 1.0;
    return (A * z).exp() * v;
}

DeviceConfig scaled_device(double& d) {
    DeviceConfig c = reference_device();
    d = std::abs(c.inv_velocity_mismatch());
    c.coupling_G = std::sqrt(2.0 * d);
    return c;
}

} // namespace

TEST_SUITE("quantized_pump") {

TEST_CASE("band grid") {
    BandGrid g = BandGrid::symmetric(4, 2.0);
    CHECK(g.nu_values == std::vector<double>{-3.0, -1.0, 1.0, 3.0});
    CHECK(g.total_width == 8.0);
    CHECK(g.Q0 == doctest::Approx(2.0 / (2 * units::pi)));
    CHECK_THROWS_AS(BandGrid::symmetric(0, 1.0), InvalidParameterError);
    BandGrid bad = g;
    bad.nu_values[0] = -2.5;
    CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}

TEST_CASE("uncoupled pump stays put") {
    DeviceConfig c = reference_device();
    c.coupling_G = 0.0;
    Trajectory t = propagate_amplitudes(BandGrid::symmetric(6, 1e12), c, 5.0, 50);
    for (auto& s : t.states) CHECK(s.cp == cplx(1.0));
}

TEST_CASE("two-band ODE matches closed form and matrix exponential") {
    DeviceConfig c = reference_device();
    BandGrid g = BandGrid::symmetric(2, units::thz_to_rad(1.0));
    double delta = band_detuning(g.nu_values[1], c);
    double K = std::sqrt(delta * delta + 2 * g.Q0 * std::norm(c.G()));
    Trajectory t = propagate_amplitudes(g, c, 3.0 * units::pi / K, 300);
    for (size_t i = 0; i < t.states.size(); i += 7) {
        auto& s = t.states[i];
        auto cf = two_band_closed_form(delta, c.G(), g.Q0, s.z);
        Eigen::VectorXcd ref = amplitude_oracle(g, c, s.z);
        CHECK(std::abs(s.cp - cf.cp) < 1e-9);
        CHECK(std::abs(s.cw[1] - cf.cw1) < 1e-9);
        CHECK(std::abs(s.cw[0] - cf.cw2) < 1e-9);
        CHECK(std::abs(cf.cp - ref(0)) < 1e-11);
        CHECK(std::abs(cf.cw2 - ref(1)) < 1e-11);
        CHECK(std::abs(cf.cw1 - ref(2)) < 1e-11);
        CHECK(std::abs(std::abs(s.cw[0]) - std::abs(s.cw[1])) < 1e-10);
    }
}

TEST_CASE("closed form properties") {
    cplx G = 3e-11;
    double Q0 = 1e12;
    auto z0 = two_band_closed_form(0.7, G, Q0, 0.0);
    CHECK(z0.cp == cplx(1.0));
    CHECK(z0.cw1 == cplx(0.0));
    // complete transfer and Bell state at K_R z = pi/2
    auto b = two_band_closed_form(0.0, G, Q0, 0.0);
    auto bell = two_band_closed_form(0.0, G, Q0, 0.5 * units::pi / b.K_R);
    CHECK(std::norm(bell.cp) < 1e-12);
    CHECK(std::norm(bell.cw1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(bell.cw2) == doctest::Approx(0.5).epsilon(1e-12));
    for (double z : {0.3, 1.7e4, 9.1e4}) {
        auto s = two_band_closed_form(2e-5, G, Q0, z);
        CHECK(s.cp.imag() == 0.0);
        CHECK(std::abs(s.cw1) == doctest::Approx(std::abs(s.cw2)).epsilon(1e-14));
        CHECK(std::norm(s.cp) + std::norm(s.cw1) + std::norm(s.cw2) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(two_band_closed_form(0.0, G, 0.0, 1.0), InvalidParameterError);
    // K_R = sqrt(2e12) * 3e-11, quoted as ~3e-5 /cm
    auto p = two_band_closed_form(0.0, G, 1e12, 0.0);
    CHECK(p.K_R == doctest::Approx(std::sqrt(2e12) * 3e-11).epsilon(1e-14));
    CHECK(p.K_R / 3e-5 < 3.0);
    CHECK(p.K_R / 3e-5 > 1.0 / 3.0);
}

TEST_CASE("broadband regimes") {
    DeviceConfig c = reference_device();
    DeviceConfig m = c;
    m.tm.group_velocity = m.te.group_velocity;
    auto r = broadband_regime(m, 5e13);
    CHECK(r.alpha == 0.0);
    CHECK(r.regime == PumpRegime::Rabi);
    CHECK(r.K_R == doctest::Approx(3e-11 * std::sqrt(5e13 / (2 * units::pi))));
    // two symmetric bands: Omega = 2 dw gives sqrt(2 Q0) |G|
    double dw = units::thz_to_rad(1.0);
    auto two = broadband_regime(m, 2 * dw);
    CHECK(two.K_R == doctest::Approx(std::sqrt(2 * dw / (2 * units::pi)) * 3e-11).epsilon(1e-14));
    auto p = broadband_regime(c, units::thz_to_rad(10.0));
    CHECK(p.regime == PumpRegime::Decay);
    CHECK(p.alpha > 1e4);
    // 2 kappa ~ 1e-9 /cm (order of magnitude) under either prefactor
    CHECK(2 * p.kappa_half > 1e-10);
    CHECK(2 * p.kappa_full < 1e-8);
    CHECK(p.kappa_full == doctest::Approx(2 * p.kappa_half));
    CHECK_THROWS_AS(broadband_regime(c, 0.0), InvalidParameterError);
}

TEST_CASE("decay fit") {
    std::vector<double> z, a;
    for (int i = 0; i <= 400; ++i) {
        z.push_back(i * 0.01);
        a.push_back(std::exp(-1.37 * z.back()));
    }
    DecayFit f = fit_decay_exponent(z, a);
    CHECK(f.kappa == doctest::Approx(1.37).epsilon(1e-6));
    CHECK(f.residual < 1e-10);
    // oscillating input
    std::vector<double> osc;
    for (double x : z) osc.push_back(std::abs(std::cos(3 * x)));
    CHECK_THROWS_AS(fit_decay_exponent(z, osc), RegimeError);
    // alpha << 1 is the Rabi regime
    Trajectory t;
    for (size_t i = 0; i < z.size(); ++i) {
        StateAmplitudes s;
        s.z = z[i];
        s.cp = a[i];
        t.states.push_back(s);
    }
    CHECK_THROWS_AS(fit_decay_exponent(t, 0.01), RegimeError);
    CHECK(fit_decay_exponent(t, 20.0).kappa == doctest::Approx(1.37).epsilon(1e-6));
}

TEST_CASE("norm conservation over 1e4 steps") {
    double d;
    DeviceConfig c = scaled_device(d);
    BandGrid g = BandGrid::symmetric(64, 0.05 / d);
    Trajectory t = propagate_amplitudes(g, c, 4.0, 10000, nullptr, 10);
    CHECK(t.max_norm_drift < 1e-10);
    CHECK(t.states.size() == 1001);
}

TEST_CASE("band splitting does not matter at fixed total width") {
    double d;
    DeviceConfig c = scaled_device(d);
    const double total = 2.0 / d;  // Omega |d(1/v)| = 2
    std::vector<std::vector<cplx>> cps;
    for (int n : {800, 1600, 3200}) {
        BandGrid g = BandGrid::symmetric(n, total / n);
        Trajectory t = propagate_amplitudes(g, c, 3.0, 60);
        std::vector<cplx> v;
        for (auto& s : t.states) v.push_back(s.cp);
        cps.push_back(v);
    }
    for (size_t i = 0; i < cps[0].size(); ++i) {
        double ref = std::max(std::abs(cps[2][i]), 1e-3);
        CHECK(std::abs(cps[0][i] - cps[2][i]) / ref < 1e-4);
        CHECK(std::abs(cps[1][i] - cps[2][i]) / ref < 1e-4);
    }
}

TEST_CASE("user-supplied initial state") {
    double d;
    DeviceConfig c = scaled_device(d);
    BandGrid g = BandGrid::symmetric(4, 0.1 / d);
    StateAmplitudes s;
    s.cp = 0.0;
    s.cw = {0.5, 0.5, 0.5, 0.5};
    Trajectory t = propagate_amplitudes(g, c, 1.0, 100, &s);
    CHECK(t.max_norm_drift < 1e-12);
    s.cw[0] = 0.6;
    CHECK_THROWS_AS(propagate_amplitudes(g, c, 1.0, 100, &s), PreconditionError);
    s.cw = {0.5, 0.5};
    CHECK_THROWS_AS(propagate_amplitudes(g, c, 1.0, 100, &s), PreconditionError);
}

TEST_CASE("SIMD and scalar trajectories agree") {
    if (!kernels::isa_available(kernels::Isa::Avx2)) return;
    double d;
    DeviceConfig c = scaled_device(d);
    BandGrid g = BandGrid::symmetric(203, 0.05 / d);
    Trajectory a = propagate_amplitudes(g, c, 2.0, 200, nullptr, 1, kernels::Isa::Scalar);
    Trajectory b = propagate_amplitudes(g, c, 2.0, 200, nullptr, 1, kernels::Isa::Avx2);
    for (size_t i = 0; i < a.states.size(); ++i) {
        CHECK(std::abs(a.states[i].cp - b.states[i].cp) < 1e-12);
        for (size_t k = 0; k < g.nu_values.size(); k += 17)
            CHECK(std::abs(a.states[i].cw[k] - b.states[i].cw[k]) < 1e-12);
    }
}

TEST_CASE("classical coupling from the single-photon power") {
    DeviceConfig c = reference_device();
    double Q0 = 1e12;
    double power = units::hbar * c.pump.omega * Q0;
    cplx g = classical_g_from_pump_power(c, power);
    // single-band Rabi wavenumber |G| sqrt(Q0)
    CHECK(std::abs(g) == doctest::Approx(3e-11 * std::sqrt(Q0)).epsilon(1e-12));
    CHECK(classical_g_from_pump_power(c, 0.0) == cplx(0.0));
    CHECK_THROWS_AS(classical_g_from_pump_power(c, -1.0), InvalidParameterError);
}

}
