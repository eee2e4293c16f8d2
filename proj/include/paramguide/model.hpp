#pragma once

#include <vector>

#include "paramguide/units.hpp"

namespace paramguide {

enum class ModeLabel { TE, TM, Pump };

struct ModeParams {
    ModeLabel label = ModeLabel::TE;
    double group_velocity = 0.0;  // cm/s
    double field_loss = 0.0;      // gamma = Gamma/v, 1/cm
    double omega = 0.0;           // central angular frequency, rad/s

    void validate() const;
};

struct DeviceConfig {
    ModeParams te{ModeLabel::TE};
    ModeParams tm{ModeLabel::TM};
    ModeParams pump{ModeLabel::Pump};
    double coupling_g = 0.0;      // |g|, 1/cm
    double coupling_G = 0.0;      // |G|, s^1/2 / cm
    double dk = 0.0;              // static phase mismatch, 1/cm
    double length = 0.1;          // cm
    double temperature = 0.0;     // reservoir temperature, erg
    double coupling_phase = 0.0;  // rad, shared by g and G

    void validate() const;

    cplx g() const { return std::polar(coupling_g, coupling_phase); }
    cplx G() const { return std::polar(coupling_G, coupling_phase); }
    // 1/v_TE - 1/v_TM
    double inv_velocity_mismatch() const;
    double loss_sum() const { return te.field_loss + tm.field_loss; }
    double loss_diff() const { return te.field_loss - tm.field_loss; }
};

struct SpectralGrid {
    std::vector<double> detunings;  // rad/s
    double bin_width = 0.0;
    double window_center = 0.0;
    double window_width = 0.0;

    void validate() const;
    static SpectralGrid uniform(double nu_lo, double nu_hi, int samples);
};

cplx derive_g(cplx overlap_A, const ModeParams& te, const ModeParams& tm);

double phase_mismatch_D(double nu, const DeviceConfig& cfg);

// Full width of the main SPDC lobe, rad/s.
double total_spdc_bandwidth(const DeviceConfig& cfg);
double total_spdc_bandwidth(const DeviceConfig& cfg, double length);

// Bose-Einstein occupation; T in erg.
double thermal_occupation(double omega, double temperature);

double interaction_time(double Lz, double v1, double v2);

// Two readings of the parametric half-width, rad/s:
// narrow: |nu| <= |g| |1/vTE - 1/vTM|^-1, wide: |D(nu)| < 2|g|.
struct ParametricHalfWidth {
    double narrow;
    double wide;
};
ParametricHalfWidth parametric_half_width(const DeviceConfig& cfg);

// Parameters of the GaSb laser device used throughout the examples.
DeviceConfig reference_device();

} // namespace paramguide
