#pragma once

#include <optional>
#include <vector>

#include "paramguide/model.hpp"

namespace paramguide {

struct DispersionPoint {
    double nu = 0.0;
    double D = 0.0;
    cplx kappa;
    cplx mu_plus;
    cplx mu_minus;
    cplx K_plus;
    cplx K_minus;
    bool has_K = false;
};

// Transfer coefficients z = 0 -> z = L for (a_TE(nu), a_TM^dagger(-nu)).
struct Transfer2 {
    cplx t11, t12, t21, t22;
};

struct NoiseDensity {
    double te = 0.0;
    double tm = 0.0;
};

// sqrt with Arg in (-pi, pi]; a negative real axis argument maps to +i.
cplx principal_sqrt(cplx z);

DispersionPoint dispersion_point(double nu, const DeviceConfig& cfg, bool want_K = true);

Transfer2 transfer_closed_form(double nu, double L, const DeviceConfig& cfg);

double signal_flux_density(double nu, double L, const DeviceConfig& cfg);

// F(mu+-, L) and F/|kappa|^2; the latter stays finite at kappa = 0.
struct NoiseKernel {
    double F = 0.0;
    double F_over_k2 = 0.0;
};
NoiseKernel noise_kernel(cplx kappa, double loss_sum, double L);

NoiseDensity noise_flux_density(double nu, double L, const DeviceConfig& cfg);

enum class AsymptoticRegime { HighGain, LowGainShortL };

struct AsymptoticValue {
    double value = 0.0;
    bool valid = true;
};
AsymptoticValue asymptotic_flux_density(double nu, double L, const DeviceConfig& cfg,
                                        AsymptoticRegime regime);

struct NondegenerateFlux {
    double q_te = 0.0;
    double q_tm = 0.0;
    bool valid = true;
};
NondegenerateFlux nondegenerate_flux(double delta_k, double L, const DeviceConfig& cfg,
                                     double bandwidth);

struct NarrowbandGain {
    double cosh_sq, sinh_sq, phase;
};
NarrowbandGain narrowband_gain(double z, const DeviceConfig& cfg);

enum class FluxComponent { Signal, NoiseTE, NoiseTM };

struct FluxSpectrum {
    SpectralGrid grid;
    std::vector<double> signal, noise_te, noise_tm;
    double total_signal = 0.0, total_noise_te = 0.0, total_noise_tm = 0.0;
    // When present, band integrals re-evaluate the closed form instead of
    // interpolating the samples.
    std::optional<DeviceConfig> source;
    double length = 0.0;
};

FluxSpectrum compute_spectrum(const DeviceConfig& cfg, double L, const SpectralGrid& grid,
                              bool with_noise = true);

// Default grid: 2001 samples over +-1.5 total bandwidth.
SpectralGrid default_grid(const DeviceConfig& cfg, double L);

double integrate_band(const FluxSpectrum& s, double nu_lo, double nu_hi,
                      FluxComponent c = FluxComponent::Signal);

} // namespace paramguide
