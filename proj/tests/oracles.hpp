#pragma once

// Test-side oracles, kept independent of the library's computation paths:
// Simpson quadrature (the library uses adaptive midpoint), dense brute-force
// conjugates (the library uses vertex enumeration / the fast transform), and
// pairwise-interpolation convex envelopes.

#include <cmath>
#include <functional>
#include <vector>

#include "fasa/convex_core.hpp"

namespace oracles {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

// Adaptive Simpson; handles integrable endpoint singularities by a slight
// inward clip of the evaluation points.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int depth = 48) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// sup over a dense x-grid of x*y - u(x); brute-force conjugate value.
inline double brute_conjugate_1d(const std::function<double(double)>& u, double lo, double hi,
                                 double y, int samples = 200001) {
    double best = -fasa::kInf;
    for (int i = 0; i < samples; ++i) {
        double x = lo + (hi - lo) * i / (samples - 1);
        double v = u(x);
        if (std::isfinite(v)) best = std::max(best, x * y - v);
    }
    return best;
}

// sup over a dense 2-D grid of <x,y> - u(x).
inline double brute_conjugate_2d(const std::function<double(const fasa::Vec&)>& u,
                                 const fasa::Box& bb, const fasa::Vec& y, int samples = 401) {
    double best = -fasa::kInf;
    for (int i = 0; i < samples; ++i)
        for (int j = 0; j < samples; ++j) {
            fasa::Vec x{bb.lo[0] + (bb.hi[0] - bb.lo[0]) * i / (samples - 1),
                        bb.lo[1] + (bb.hi[1] - bb.lo[1]) * j / (samples - 1)};
            double v = u(x);
            if (std::isfinite(v)) best = std::max(best, dot(x, y) - v);
        }
    return best;
}

// Lower convex envelope of samples (x_i, v_i) at x, by pairwise chords.
inline double brute_envelope(const std::vector<double>& xs, const std::vector<double>& vs,
                             double x) {
    double best = fasa::kInf;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(vs[i])) continue;
        if (std::fabs(xs[i] - x) < 1e-12) best = std::min(best, vs[i]);
        for (size_t j = i + 1; j < xs.size(); ++j) {
            if (!std::isfinite(vs[j])) continue;
            if (xs[i] <= x + 1e-12 && x <= xs[j] + 1e-12 && xs[j] > xs[i]) {
                double t = (x - xs[i]) / (xs[j] - xs[i]);
                if (t >= -1e-12 && t <= 1 + 1e-12)
                    best = std::min(best, (1 - t) * vs[i] + t * vs[j]);
            }
        }
    }
    return best;
}

// 1-D gradient-range measure of a PL function over an interval, by dense
// finite-difference slopes.
inline double brute_gradient_range(const std::function<double(double)>& u, double lo,
                                   double hi, int samples = 100001) {
    double h = (hi - lo) / samples;
    double smin = fasa::kInf, smax = -fasa::kInf;
    for (int i = 0; i < samples; ++i) {
        double x = lo + (i + 0.5) * h;
        double s = (u(x + h / 4) - u(x - h / 4)) / (h / 2);
        if (std::isfinite(s)) {
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
    }
    return smax - smin;
}

}  // namespace oracles
