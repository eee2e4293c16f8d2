#include "paramguide/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace paramguide::kernels {

bool isa_available(Isa isa) {
    if (isa == Isa::Scalar) return true;
#ifdef PARAMGUIDE_HAVE_AVX2_KERNELS
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Isa detect() {
    if (const char* s = std::getenv("PARAMGUIDE_SIMD")) {
        if (std::strcmp(s, "scalar") == 0) return Isa::Scalar;
        if (std::strcmp(s, "avx2") == 0 && isa_available(Isa::Avx2)) return Isa::Avx2;
    }
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

} // namespace

Isa active_isa() {
    static const Isa isa = detect();
    return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#ifdef PARAMGUIDE_HAVE_AVX2_KERNELS
#define PG_DISPATCH(fn, ...) \
    return (isa == Isa::Avx2) ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define PG_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

cplx sum(const double* re, const double* im, std::size_t n, Isa isa) {
    PG_DISPATCH(sum, re, im, n);
}

double norm_sq(const double* re, const double* im, std::size_t n, Isa isa) {
    PG_DISPATCH(norm_sq, re, im, n);
}

cplx dot(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n,
         Isa isa) {
    PG_DISPATCH(dot, ar, ai, br, bi, n);
}

void band_rhs(const double* wr, const double* wi, const double* delta, cplx src, double* outr,
              double* outi, std::size_t n, Isa isa) {
    PG_DISPATCH(band_rhs, wr, wi, delta, src, outr, outi, n);
}

void axpy(const double* baser, const double* basei, const double* kr, const double* ki, double h,
          double* outr, double* outi, std::size_t n, Isa isa) {
    PG_DISPATCH(axpy, baser, basei, kr, ki, h, outr, outi, n);
}

void accumulate(double* accr, double* acci, const double* kr, const double* ki, double h,
                std::size_t n, Isa isa) {
    PG_DISPATCH(accumulate, accr, acci, kr, ki, h, n);
}

} // namespace paramguide::kernels
