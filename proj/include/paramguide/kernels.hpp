#pragma once

#include <cstddef>

#include "paramguide/units.hpp"

// Hot loops of the band solvers, stored as separate real/imag arrays.
// Every kernel has a scalar reference and an AVX2+FMA variant; the variant is
// picked once at runtime (PARAMGUIDE_SIMD=scalar|avx2 overrides detection).
namespace paramguide::kernels {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
bool isa_available(Isa isa);
const char* isa_name(Isa isa);

// sum_i (re_i + i im_i)
cplx sum(const double* re, const double* im, std::size_t n, Isa isa);
// sum_i |z_i|^2
double norm_sq(const double* re, const double* im, std::size_t n, Isa isa);
// sum_i a_i * b_i (no conjugation)
cplx dot(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n,
         Isa isa);
// out = i*delta*w + src
void band_rhs(const double* wr, const double* wi, const double* delta, cplx src, double* outr,
              double* outi, std::size_t n, Isa isa);
// out = base + h*k
void axpy(const double* baser, const double* basei, const double* kr, const double* ki, double h,
          double* outr, double* outi, std::size_t n, Isa isa);
// acc += h*k
void accumulate(double* accr, double* acci, const double* kr, const double* ki, double h,
                std::size_t n, Isa isa);

namespace scalar {
cplx sum(const double* re, const double* im, std::size_t n);
double norm_sq(const double* re, const double* im, std::size_t n);
cplx dot(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n);
void band_rhs(const double* wr, const double* wi, const double* delta, cplx src, double* outr,
              double* outi, std::size_t n);
void axpy(const double* baser, const double* basei, const double* kr, const double* ki, double h,
          double* outr, double* outi, std::size_t n);
void accumulate(double* accr, double* acci, const double* kr, const double* ki, double h,
                std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PARAMGUIDE_HAVE_AVX2_KERNELS 1
namespace avx2 {
cplx sum(const double* re, const double* im, std::size_t n);
double norm_sq(const double* re, const double* im, std::size_t n);
cplx dot(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n);
void band_rhs(const double* wr, const double* wi, const double* delta, cplx src, double* outr,
              double* outi, std::size_t n);
void axpy(const double* baser, const double* basei, const double* kr, const double* ki, double h,
          double* outr, double* outi, std::size_t n);
void accumulate(double* accr, double* acci, const double* kr, const double* ki, double h,
                std::size_t n);
} // namespace avx2
#endif

} // namespace paramguide::kernels
