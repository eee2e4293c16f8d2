#pragma once

#include <array>
#include <vector>

#include "paramguide/model.hpp"

namespace paramguide::oracle {

using Mat2 = std::array<cplx, 4>;  // row-major

struct TransferMatrix {
    double nu = 0.0;
    Mat2 entries{};
    double error_estimate = 0.0;  // Richardson estimate, relative to max |entry|
    int steps = 0;
};

// Plain RK4 with n steps over [z0, z1] of the raw coupled-mode system.
Mat2 rk4_transfer(double nu, double z0, double z1, const DeviceConfig& cfg, int n);

// Fixed step (rounded so L/step is an integer), checked against the
// half-step run. Throws AccuracyError when the estimate exceeds 1e-6.
TransferMatrix integrate_transfer(double nu, double L, const DeviceConfig& cfg, double step);

// Step count used when the caller does not choose one.
int default_steps(double nu, double L, const DeviceConfig& cfg);

struct NoiseQuadrature {
    double te = 0.0;
    double tm = 0.0;
    double error_estimate = 0.0;
};

// Langevin second moments by quadrature of the propagated kernel.
// n_T < 0 means: take Bose-Einstein factors from cfg.temperature.
NoiseQuadrature noise_flux_quadrature(double nu, double L, const DeviceConfig& cfg,
                                      double n_T = -1.0, int steps = 0);

// |T11|^2 - |T12|^2 + 2 g_TE int |T11(L,xi)|^2 - 2 g_TM int |T12(L,xi)|^2
double commutator_sum(double nu, double L, const DeviceConfig& cfg, int steps = 0);

struct Window {
    double lo = 0.0, hi = 0.0;
    double width() const { return hi - lo; }
};

struct WickMoments {
    double K = 0.0;             // <A_TM^dag A_TE^dag A_TE A_TM> - Q_te Q_tm
    double K_flux_order = 0.0;  // <N_TE N_TM> - Q_te Q_tm
    double D_te = 0.0;
    double D_tm = 0.0;
    double Q_te = 0.0;
    double Q_tm = 0.0;
};

// Discretized fourth moments; TE is detected in `plus`, TM in `minus`.
// Langevin terms are dropped, matching the correlation closed forms.
WickMoments wick_fourth_moment(const Window& plus, const Window& minus, double L, double tau,
                               const DeviceConfig& cfg, int bins = 4096);

// Same, for several delays sharing one set of transfer matrices.
std::vector<WickMoments> wick_fourth_moment(const Window& plus, const Window& minus, double L,
                                            const std::vector<double>& taus,
                                            const DeviceConfig& cfg, int bins = 4096);

} // namespace paramguide::oracle
