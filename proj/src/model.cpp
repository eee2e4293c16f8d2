#include "paramguide/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "paramguide/errors.hpp"

namespace paramguide {

namespace {

const char* label_name(ModeLabel l) {
    switch (l) {
    case ModeLabel::TE: return "te";
    case ModeLabel::TM: return "tm";
    case ModeLabel::Pump: return "pump";
    }
    return "?";
}

} // namespace

void ModeParams::validate() const {
    std::string n = label_name(label);
    if (!(group_velocity > 0.0) || !std::isfinite(group_velocity))
        throw InvalidParameterError(n + ": group velocity must be positive");
    if (!(field_loss >= 0.0) || !std::isfinite(field_loss))
        throw InvalidParameterError(n + ": field loss must be >= 0");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw InvalidParameterError(n + ": central frequency must be positive");
}

void DeviceConfig::validate() const {
    te.validate();
    tm.validate();
    pump.validate();
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidParameterError("device length must be positive");
    if (!(coupling_g >= 0.0) || !std::isfinite(coupling_g))
        throw InvalidParameterError("coupling g must be >= 0 (phase is separate)");
    if (!(coupling_G >= 0.0) || !std::isfinite(coupling_G))
        throw InvalidParameterError("coupling G must be >= 0 (phase is separate)");
    if (!(temperature >= 0.0))
        throw InvalidParameterError("temperature must be >= 0");
    if (!std::isfinite(dk) || !std::isfinite(coupling_phase))
        throw InvalidParameterError("dk and coupling phase must be finite");
    double rel = std::abs(pump.omega - te.omega - tm.omega) / pump.omega;
    if (rel > 1e-9)
        throw ConfigError("energy conservation violated: |w_p - w_te - w_tm|/w_p = " +
                          std::to_string(rel));
}

double DeviceConfig::inv_velocity_mismatch() const {
    return 1.0 / te.group_velocity - 1.0 / tm.group_velocity;
}

void SpectralGrid::validate() const {
    for (size_t i = 1; i < detunings.size(); ++i)
        if (!(detunings[i] > detunings[i - 1]))
            throw InvalidParameterError("grid detunings must be strictly increasing");
    if (!(bin_width > 0.0))
        throw InvalidParameterError("grid bin width must be positive");
}

SpectralGrid SpectralGrid::uniform(double nu_lo, double nu_hi, int samples) {
    if (samples < 2 || !(nu_hi > nu_lo))
        throw InvalidParameterError("uniform grid needs samples >= 2 and hi > lo");
    SpectralGrid g;
    g.detunings.resize(samples);
    double h = (nu_hi - nu_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i)
        g.detunings[i] = (i == samples - 1) ? nu_hi : nu_lo + h * i;
    g.bin_width = h;
    g.window_center = 0.5 * (nu_lo + nu_hi);
    g.window_width = nu_hi - nu_lo;
    return g;
}

cplx derive_g(cplx overlap_A, const ModeParams& te, const ModeParams& tm) {
    if (!(te.group_velocity > 0.0) || !(tm.group_velocity > 0.0))
        throw InvalidParameterError("derive_g: group velocities must be positive");
    return overlap_A / (units::hbar * std::sqrt(te.group_velocity * tm.group_velocity));
}

double phase_mismatch_D(double nu, const DeviceConfig& cfg) {
    return cfg.dk + nu * cfg.inv_velocity_mismatch();
}

double total_spdc_bandwidth(const DeviceConfig& cfg) {
    return total_spdc_bandwidth(cfg, cfg.length);
}

double total_spdc_bandwidth(const DeviceConfig& cfg, double length) {
    double d = std::abs(cfg.inv_velocity_mismatch());
    if (d == 0.0)
        throw InvalidParameterError("degenerate group velocities: SPDC bandwidth is infinite");
    if (!(length > 0.0))
        throw InvalidParameterError("length must be positive");
    return 4.0 * units::pi / (length * d);
}

double thermal_occupation(double omega, double temperature) {
    if (temperature <= 0.0) return 0.0;
    double x = units::hbar * omega / temperature;
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

double interaction_time(double Lz, double v1, double v2) {
    if (!(v1 > 0.0) || !(v2 > 0.0))
        throw InvalidParameterError("interaction_time: velocities must be positive");
    return Lz / std::sqrt(v1 * v2);
}

ParametricHalfWidth parametric_half_width(const DeviceConfig& cfg) {
    double d = std::abs(cfg.inv_velocity_mismatch());
    if (d == 0.0) {
        double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return {cfg.coupling_g / d, 2.0 * cfg.coupling_g / d};
}

DeviceConfig reference_device() {
    DeviceConfig c;
    c.te = {ModeLabel::TE, 8.24e9, 4.0, units::nm_to_rad(4064.0)};
    c.tm = {ModeLabel::TM, 8.34e9, 3.0, units::nm_to_rad(4064.0)};
    c.pump = {ModeLabel::Pump, 8.3e9, 0.0, units::nm_to_rad(2032.0)};
    c.coupling_g = 0.08;
    c.coupling_G = 3e-11;
    c.length = 0.1;
    return c;
}

} // namespace paramguide
