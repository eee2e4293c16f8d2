#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "paramguide/kernels.hpp"

using namespace paramguide;
using namespace paramguide::kernels;

namespace {

struct Data {
    std::vector<double> ar, ai, br, bi, d;
    explicit Data(size_t n, unsigned seed) : ar(n), ai(n), br(n), bi(n), d(n) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (size_t i = 0; i < n; ++i) {
            ar[i] = u(rng);
            ai[i] = u(rng);
            br[i] = u(rng);
            bi[i] = u(rng);
            d[i] = 50.0 * u(rng);
        }
    }
};

double cdiff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference kernels") {
    Data x(5, 1);
    cplx s = 0, dt = 0;
    double nn = 0;
    for (size_t i = 0; i < 5; ++i) {
        s += cplx(x.ar[i], x.ai[i]);
        dt += cplx(x.ar[i], x.ai[i]) * cplx(x.br[i], x.bi[i]);
        nn += std::norm(cplx(x.ar[i], x.ai[i]));
    }
    CHECK(cdiff(scalar::sum(x.ar.data(), x.ai.data(), 5), s) < 1e-15);
    CHECK(cdiff(scalar::dot(x.ar.data(), x.ai.data(), x.br.data(), x.bi.data(), 5), dt) < 1e-15);
    CHECK(scalar::norm_sq(x.ar.data(), x.ai.data(), 5) == doctest::Approx(nn).epsilon(1e-15));
    std::vector<double> orr(5), oi(5);
    cplx src(0.3, -0.2);
    scalar::band_rhs(x.ar.data(), x.ai.data(), x.d.data(), src, orr.data(), oi.data(), 5);
    for (size_t i = 0; i < 5; ++i) {
        cplx ref = cplx(0, x.d[i]) * cplx(x.ar[i], x.ai[i]) + src;
        CHECK(cdiff(cplx(orr[i], oi[i]), ref) < 1e-15);
    }
}

TEST_CASE("AVX2 kernels match scalar references") {
    if (!isa_available(Isa::Avx2)) {
        MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
        return;
    }
#ifdef PARAMGUIDE_HAVE_AVX2_KERNELS
    for (size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 1000, 4801}) {
        Data x(n, 100 + static_cast<unsigned>(n));
        const double *ar = x.ar.data(), *ai = x.ai.data(), *br = x.br.data(), *bi = x.bi.data();
        CHECK(cdiff(avx2::sum(ar, ai, n), scalar::sum(ar, ai, n)) < 1e-13);
        CHECK(std::abs(avx2::norm_sq(ar, ai, n) - scalar::norm_sq(ar, ai, n)) <=
              1e-13 * std::max(1.0, scalar::norm_sq(ar, ai, n)));
        CHECK(cdiff(avx2::dot(ar, ai, br, bi, n), scalar::dot(ar, ai, br, bi, n)) < 1e-13);

        std::vector<double> s1(n), s2(n), v1(n), v2(n);
        cplx src(0.7, -1.1);
        scalar::band_rhs(ar, ai, x.d.data(), src, s1.data(), s2.data(), n);
        avx2::band_rhs(ar, ai, x.d.data(), src, v1.data(), v2.data(), n);
        for (size_t i = 0; i < n; ++i) {
            CHECK(std::abs(s1[i] - v1[i]) <= 1e-14 * std::max(1.0, std::abs(s1[i])));
            CHECK(std::abs(s2[i] - v2[i]) <= 1e-14 * std::max(1.0, std::abs(s2[i])));
        }
        scalar::axpy(ar, ai, br, bi, 0.37, s1.data(), s2.data(), n);
        avx2::axpy(ar, ai, br, bi, 0.37, v1.data(), v2.data(), n);
        for (size_t i = 0; i < n; ++i) {
            CHECK(std::abs(s1[i] - v1[i]) <= 1e-15);
            CHECK(std::abs(s2[i] - v2[i]) <= 1e-15);
        }
        scalar::accumulate(s1.data(), s2.data(), br, bi, -0.21, n);
        avx2::accumulate(v1.data(), v2.data(), br, bi, -0.21, n);
        for (size_t i = 0; i < n; ++i) {
            CHECK(std::abs(s1[i] - v1[i]) <= 1e-15);
            CHECK(std::abs(s2[i] - v2[i]) <= 1e-15);
        }
    }
#endif
}

TEST_CASE("dispatch honours the requested ISA") {
    Data x(37, 9);
    cplx a = sum(x.ar.data(), x.ai.data(), 37, Isa::Scalar);
    CHECK(cdiff(a, scalar::sum(x.ar.data(), x.ai.data(), 37)) == 0.0);
    CHECK(std::string(isa_name(Isa::Scalar)) == "scalar");
    CHECK(isa_available(Isa::Scalar));
}

}
