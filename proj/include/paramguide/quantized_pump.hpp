#pragma once

#include <vector>

#include "paramguide/kernels.hpp"
#include "paramguide/model.hpp"

namespace paramguide {

struct BandGrid {
    std::vector<double> nu_values;  // band centers, rad/s
    double band_width = 0.0;        // rad/s
    double total_width = 0.0;       // rad/s
    double Q0 = 0.0;                // band_width / 2pi, 1/s

    void validate() const;
    // count bands of width band_width centred on (k - (count-1)/2) band_width
    static BandGrid symmetric(int count, double band_width);
};

struct StateAmplitudes {
    cplx cp = 1.0;
    std::vector<cplx> cw;
    double z = 0.0;
    double norm() const;
};

struct Trajectory {
    std::vector<StateAmplitudes> states;
    double max_norm_drift = 0.0;
    int substeps = 1;  // internal RK4 steps per recorded step
};

// delta_nu = nu (1/v_TM - 1/v_TE)
double band_detuning(double nu, const DeviceConfig& cfg);

// RK4 over n_steps recorded steps; internal substeps keep h * rate <= 0.005.
// When init is null the pump photon starts alone (C_p = 1).
Trajectory propagate_amplitudes(const BandGrid& grid, const DeviceConfig& cfg, double z_max,
                                int n_steps, const StateAmplitudes* init = nullptr,
                                int record_every = 1,
                                kernels::Isa isa = kernels::active_isa());

struct TwoBandSolution {
    cplx cp, cw1, cw2;
    double K_R = 0.0;
    double phi_z = 0.0;
};

// Band 1 has detuning +delta, band 2 has -delta.
TwoBandSolution two_band_closed_form(double delta, cplx G, double Q0, double z);

enum class PumpRegime { Rabi, Intermediate, Decay };

struct BroadbandRegime {
    double alpha = 0.0;
    PumpRegime regime = PumpRegime::Rabi;
    double K_R = 0.0;             // |G| sqrt(Omega / 2pi)
    double kappa_half = 0.0;      // |G|^2 / (2 |1/vTM - 1/vTE|)
    double kappa_full = 0.0;      // |G|^2 / |1/vTM - 1/vTE|
    double rate_or_K = 0.0;       // K_R for Rabi, kappa_half for Decay, else K_R
};

BroadbandRegime broadband_regime(const DeviceConfig& cfg, double total_width);

struct DecayFit {
    double kappa = 0.0;
    double residual = 0.0;  // rms of ln|C_p| residuals
    int points = 0;
};

DecayFit fit_decay_exponent(const std::vector<double>& z, const std::vector<double>& abs_cp);
DecayFit fit_decay_exponent(const Trajectory& t);
// Also rejects alpha < 10.
DecayFit fit_decay_exponent(const Trajectory& t, double alpha);

// Classical coupling g produced by a classical pump of the given power (erg/s)
// in the same waveguide, via the overlap integral implied by G.
cplx classical_g_from_pump_power(const DeviceConfig& cfg, double power);

} // namespace paramguide
