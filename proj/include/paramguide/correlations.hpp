#pragma once

#include <vector>

#include "paramguide/model.hpp"

namespace paramguide {

// How the spectral kernels are evaluated.
//  General: exact lossy transfer coefficients, Arg g kept.
//  LowGain: kappa ~ i|kappa| simplification with g taken real.
enum class KernelPath { General, LowGain };

// TE is detected in [center - width/2, center + width/2]; TM in the mirror
// window around -center.
struct CorrelationWindows {
    double center = 0.0;  // rad/s
    double width = 0.0;   // rad/s
    double lo() const { return center - 0.5 * width; }
    double hi() const { return center + 0.5 * width; }
};

struct CorrelationResult {
    double theta = 0.0;
    double K = 0.0;
    double D_te = 0.0;
    double D_tm = 0.0;
    double Q_te = 0.0;
    double Q_tm = 0.0;
    double tau = 0.0;
    CorrelationWindows windows;
    bool noise_band_warning = false;
};

double fluctuation_D(ModeLabel mode, const CorrelationWindows& w, double L,
                     const DeviceConfig& cfg, KernelPath path = KernelPath::General);

double correlation_K(const CorrelationWindows& w, double L, double tau, const DeviceConfig& cfg,
                     KernelPath path = KernelPath::General);

CorrelationResult theta(const CorrelationWindows& w, double L, double tau,
                        const DeviceConfig& cfg, KernelPath path = KernelPath::General);

std::vector<CorrelationResult> theta_sweep(const CorrelationWindows& w, double L,
                                           const std::vector<double>& taus,
                                           const DeviceConfig& cfg,
                                           KernelPath path = KernelPath::General);

// True when |D(nu)| < 10 max(gamma) somewhere in either window.
bool touches_noise_band(const CorrelationWindows& w, const DeviceConfig& cfg);

} // namespace paramguide
