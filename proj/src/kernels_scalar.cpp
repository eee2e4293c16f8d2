#include "paramguide/kernels.hpp"

namespace paramguide::kernels::scalar {

cplx sum(const double* re, const double* im, std::size_t n) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += re[i];
        si += im[i];
    }
    return {sr, si};
}

double norm_sq(const double* re, const double* im, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += re[i] * re[i] + im[i] * im[i];
    return s;
}

cplx dot(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += ar[i] * br[i] - ai[i] * bi[i];
        si += ar[i] * bi[i] + ai[i] * br[i];
    }
    return {sr, si};
}

void band_rhs(const double* wr, const double* wi, const double* delta, cplx src, double* outr,
              double* outi, std::size_t n) {
    const double sr = src.real(), si = src.imag();
    for (std::size_t i = 0; i < n; ++i) {
        outr[i] = sr - delta[i] * wi[i];
        outi[i] = si + delta[i] * wr[i];
    }
}

void axpy(const double* baser, const double* basei, const double* kr, const double* ki, double h,
          double* outr, double* outi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        outr[i] = baser[i] + h * kr[i];
        outi[i] = basei[i] + h * ki[i];
    }
}

void accumulate(double* accr, double* acci, const double* kr, const double* ki, double h,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        accr[i] += h * kr[i];
        acci[i] += h * ki[i];
    }
}

} // namespace paramguide::kernels::scalar
