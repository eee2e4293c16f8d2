#include "paramguide/kernels.hpp"

#ifdef PARAMGUIDE_HAVE_AVX2_KERNELS

#include <immintrin.h>

#define PG_AVX2 __attribute__((target("avx2,fma")))

namespace paramguide::kernels::avx2 {

namespace {

PG_AVX2 inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

} // namespace

PG_AVX2 cplx sum(const double* re, const double* im, std::size_t n) {
    __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        ar = _mm256_add_pd(ar, _mm256_loadu_pd(re + i));
        ai = _mm256_add_pd(ai, _mm256_loadu_pd(im + i));
    }
    double sr = hsum(ar), si = hsum(ai);
    for (; i < n; ++i) {
        sr += re[i];
        si += im[i];
    }
    return {sr, si};
}

PG_AVX2 double norm_sq(const double* re, const double* im, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_loadu_pd(re + i), m = _mm256_loadu_pd(im + i);
        acc = _mm256_fmadd_pd(r, r, acc);
        acc = _mm256_fmadd_pd(m, m, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += re[i] * re[i] + im[i] * im[i];
    return s;
}

PG_AVX2 cplx dot(const double* ar, const double* ai, const double* br, const double* bi,
                 std::size_t n) {
    __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xr = _mm256_loadu_pd(ar + i), xi = _mm256_loadu_pd(ai + i);
        __m256d yr = _mm256_loadu_pd(br + i), yi = _mm256_loadu_pd(bi + i);
        sr = _mm256_fmadd_pd(xr, yr, sr);
        sr = _mm256_fnmadd_pd(xi, yi, sr);
        si = _mm256_fmadd_pd(xr, yi, si);
        si = _mm256_fmadd_pd(xi, yr, si);
    }
    double r = hsum(sr), m = hsum(si);
    for (; i < n; ++i) {
        r += ar[i] * br[i] - ai[i] * bi[i];
        m += ar[i] * bi[i] + ai[i] * br[i];
    }
    return {r, m};
}

PG_AVX2 void band_rhs(const double* wr, const double* wi, const double* delta, cplx src,
                      double* outr, double* outi, std::size_t n) {
    const __m256d vr = _mm256_set1_pd(src.real()), vi = _mm256_set1_pd(src.imag());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_loadu_pd(delta + i);
        _mm256_storeu_pd(outr + i, _mm256_fnmadd_pd(d, _mm256_loadu_pd(wi + i), vr));
        _mm256_storeu_pd(outi + i, _mm256_fmadd_pd(d, _mm256_loadu_pd(wr + i), vi));
    }
    for (; i < n; ++i) {
        outr[i] = src.real() - delta[i] * wi[i];
        outi[i] = src.imag() + delta[i] * wr[i];
    }
}

PG_AVX2 void axpy(const double* baser, const double* basei, const double* kr, const double* ki,
                  double h, double* outr, double* outi, std::size_t n) {
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(outr + i,
                         _mm256_fmadd_pd(vh, _mm256_loadu_pd(kr + i), _mm256_loadu_pd(baser + i)));
        _mm256_storeu_pd(outi + i,
                         _mm256_fmadd_pd(vh, _mm256_loadu_pd(ki + i), _mm256_loadu_pd(basei + i)));
    }
    for (; i < n; ++i) {
        outr[i] = baser[i] + h * kr[i];
        outi[i] = basei[i] + h * ki[i];
    }
}

PG_AVX2 void accumulate(double* accr, double* acci, const double* kr, const double* ki, double h,
                        std::size_t n) {
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(accr + i,
                         _mm256_fmadd_pd(vh, _mm256_loadu_pd(kr + i), _mm256_loadu_pd(accr + i)));
        _mm256_storeu_pd(acci + i,
                         _mm256_fmadd_pd(vh, _mm256_loadu_pd(ki + i), _mm256_loadu_pd(acci + i)));
    }
    for (; i < n; ++i) {
        accr[i] += h * kr[i];
        acci[i] += h * ki[i];
    }
}

} // namespace paramguide::kernels::avx2

#endif
