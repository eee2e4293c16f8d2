#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "paramguide/errors.hpp"

namespace paramguide::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_depth = 40;
    int max_intervals = 200000;
    int initial_intervals = 1;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double mag(double v) { return std::abs(v); }
inline double mag(std::complex<double> v) { return std::abs(v); }

template <class T, class F>
void gk15(F& f, double a, double b, T& result, double& err) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    T rk = fc * wgk[7];
    T rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        T s = f(c - dx) + f(c + dx);
        rk += s * wgk[j];
        if (j % 2 == 1) rg += s * wg[j / 2];
    }
    result = rk * h;
    err = mag((rk - rg) * h);
}

} // namespace detail

// Adaptive Gauss-Kronrod integration. The interval list is refined in a
// fixed order so repeated calls give bit-identical answers.
template <class T, class F>
Result<T> integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result<T> out;
    if (a == b) return out;
    struct Seg { double a, b; T v; double e; int depth; };
    std::vector<Seg> segs;
    int n0 = opt.initial_intervals < 1 ? 1 : opt.initial_intervals;
    for (int i = 0; i < n0; ++i) {
        double lo = a + (b - a) * i / n0;
        double hi = (i == n0 - 1) ? b : a + (b - a) * (i + 1) / n0;
        Seg s{lo, hi, T{}, 0.0, 0};
        detail::gk15<T>(f, lo, hi, s.v, s.e);
        out.evaluations += 15;
        segs.push_back(s);
    }
    for (;;) {
        T total{};
        double err = 0.0;
        for (auto& s : segs) { total += s.v; err += s.e; }
        double tol = std::max(opt.abs_tol, opt.rel_tol * detail::mag(total));
        if (err <= tol || static_cast<int>(segs.size()) >= opt.max_intervals) {
            out.value = total;
            out.error = err;
            return out;
        }
        // bisect every segment carrying more than its share of the error
        double share = tol / segs.size();
        std::vector<Seg> next;
        next.reserve(segs.size() * 2);
        bool split = false;
        for (auto& s : segs) {
            if (s.e > share && s.depth < opt.max_depth) {
                double m = 0.5 * (s.a + s.b);
                Seg l{s.a, m, T{}, 0.0, s.depth + 1}, r{m, s.b, T{}, 0.0, s.depth + 1};
                detail::gk15<T>(f, l.a, l.b, l.v, l.e);
                detail::gk15<T>(f, r.a, r.b, r.v, r.e);
                out.evaluations += 30;
                next.push_back(l);
                next.push_back(r);
                split = true;
            } else {
                next.push_back(s);
            }
        }
        segs.swap(next);
        if (!split) {
            T t{};
            double e = 0.0;
            for (auto& s : segs) { t += s.v; e += s.e; }
            out.value = t;
            out.error = e;
            return out;
        }
    }
}

} // namespace paramguide::quad
