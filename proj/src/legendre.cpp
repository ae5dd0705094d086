#include "fasa/legendre.hpp"

#include <algorithm>
#include <cstdio>

namespace fasa {

std::pair<Vec, Vec> slope_range(const SampledConvexFunction& u) {
    const GridSpec& g = u.grid;
    Vec h = g.spacing();
    Vec smin = Vec::zero(g.n), smax = Vec::zero(g.n);
    std::array<bool, kMaxDim> seen{};
    for (long long f = 0; f < g.node_count(); ++f) {
        auto idx = g.unflat(f);
        double v0 = u.values[f];
        if (!std::isfinite(v0)) continue;
        for (int d = 0; d < g.n; ++d) {
            if (idx[d] + 1 >= g.m) continue;
            auto ip = idx;
            ip[d] += 1;
            double v1 = u.values[g.flat(ip)];
            if (!std::isfinite(v1)) continue;
            double s = (v1 - v0) / h[d];
            if (!seen[d]) {
                smin[d] = smax[d] = s;
                seen[d] = true;
            } else {
                smin[d] = std::min(smin[d], s);
                smax[d] = std::max(smax[d], s);
            }
        }
    }
    for (int d = 0; d < g.n; ++d)
        if (!seen[d]) {
            smin[d] = -1;
            smax[d] = 1;
        }
    return {smin, smax};
}

DualGridSpec DualGridSpec::auto_sized(const SampledConvexFunction& u, int m) {
    auto [smin, smax] = slope_range(u);
    int m_core = (m > 0 ? m : u.grid.m);
    if (m_core % 2 == 0) ++m_core;
    if (m_core < 3) m_core = 3;
    int pad = std::max(1, static_cast<int>(std::ceil(0.05 * (m_core - 1))));
    Vec lo = Vec::zero(u.grid.n), hi = Vec::zero(u.grid.n);
    for (int d = 0; d < u.grid.n; ++d) {
        double range = smax[d] - smin[d];
        if (range < 1e-9) {
            smin[d] -= 1;
            smax[d] += 1;
            range = smax[d] - smin[d];
        }
        double h = range / (m_core - 1);
        lo[d] = smin[d] - pad * h;
        hi[d] = smax[d] + pad * h;
    }
    DualGridSpec dg;
    dg.grid = GridSpec::make(u.grid.n, lo, hi, m_core + 2 * pad);
    return dg;
}

MaxAffineFunction conjugate_pl(const MaxAffineFunction& u) {
    require(u.dim() <= 2, "conjugate_pl: exact conjugation only for n <= 2");
    require(!u.finite_valued, "conjugate_pl: primal must have compact domain");
    auto verts = pl_subdivision_vertices(u);
    std::vector<Vec> slopes;
    std::vector<double> inter;
    for (const auto& v : verts) {
        slopes.push_back(v);
        inter.push_back(-u.raw_max(v));
    }
    return MaxAffineFunction::make_finite(std::move(slopes), std::move(inter), u.dim());
}

// One line: out[j] = max over finite (x_i, v_i) of x_i*y_j - v_i.
// Lower hull of (x, v) then a monotone two-pointer sweep over ascending y.
static void legendre_line(const std::vector<double>& xs, const std::vector<double>& vals,
                          const std::vector<double>& ys, std::vector<double>& out) {
    static thread_local std::vector<int> hull;
    hull.clear();
    const auto cross_ok = [&](int a, int b, int c) {
        // keep b if (b-a) x (c-a) < 0 strictly (b below chord a-c)
        double lx = xs[b] - xs[a], ly = vals[b] - vals[a];
        double rx = xs[c] - xs[a], ry = vals[c] - vals[a];
        return lx * ry - ly * rx > 0;
    };
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(vals[i])) continue;
        int c = static_cast<int>(i);
        while (hull.size() >= 2 && !cross_ok(hull[hull.size() - 2], hull.back(), c))
            hull.pop_back();
        hull.push_back(c);
    }
    if (hull.empty()) {
        std::fill(out.begin(), out.end(), -kInf);
        return;
    }
    size_t k = 0;
    for (size_t j = 0; j < ys.size(); ++j) {
        double y = ys[j];
        while (k + 1 < hull.size() &&
               xs[hull[k + 1]] * y - vals[hull[k + 1]] >= xs[hull[k]] * y - vals[hull[k]])
            ++k;
        out[j] = xs[hull[k]] * y - vals[hull[k]];
    }
}

static std::vector<double> axis_nodes(const GridSpec& g, int d) {
    std::vector<double> xs(g.m);
    double h = (g.hi[d] - g.lo[d]) / (g.m - 1);
    for (int i = 0; i < g.m; ++i) xs[i] = g.lo[d] + i * h;
    return xs;
}

SampledConvexFunction conjugate_sampled(const SampledConvexFunction& u,
                                        const DualGridSpec& dual) {
    const GridSpec& g = u.grid;
    const GridSpec& dg = dual.grid;
    require(dg.n == g.n, "conjugate_sampled: dual grid dimension mismatch");
    require(u.any_finite(), "conjugate_sampled: no finite values");
    auto [smin, smax] = slope_range(u);
    for (int d = 0; d < g.n; ++d) {
        if (smin[d] < dg.lo[d] - 1e-12 || smax[d] > dg.hi[d] + 1e-12) {
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "conjugate_sampled: dual box on axis %d does not cover slope range "
                          "[%g, %g]",
                          d, smin[d], smax[d]);
            fail(buf);
        }
    }

    // Conjugate one axis at a time: values live on a mixed grid where already
    // processed axes carry dual nodes. Sign convention: after each pass the
    // stored array is the partial conjugate g = sup_x (x*y - prev), and the
    // next pass transforms w = -g in the next primal axis.
    std::vector<double> cur = u.values;
    int n = g.n, m = g.m, md = dg.m;
    for (int d = n - 1; d >= 0; --d) {
        auto xs = axis_nodes(g, d);
        auto ys = axis_nodes(dg, d);
        // strides: axes > d already have dual extent
        long long lines = 1;
        for (int a = 0; a < n; ++a)
            if (a != d) lines *= (a < d ? m : md);
        std::vector<double> next;
        long long next_size = lines * md;
        next.resize(next_size);
        std::vector<double> line_in(m), line_out(md);
        // iterate over all index combinations of the other axes
        std::array<int, kMaxDim> extents{};
        for (int a = 0; a < n; ++a) extents[a] = (a < d ? m : md);
        extents[d] = 1;
        std::array<int, kMaxDim> idx{};
        for (long long li = 0; li < lines; ++li) {
            // decode li into idx (skipping axis d)
            long long t = li;
            for (int a = n - 1; a >= 0; --a) {
                if (a == d) {
                    idx[a] = 0;
                    continue;
                }
                idx[a] = static_cast<int>(t % extents[a]);
                t /= extents[a];
            }
            auto flat_of = [&](int pos_d, bool dual_d) {
                long long f = 0;
                for (int a = 0; a < n; ++a) {
                    int ext = (a == d) ? (dual_d ? md : m) : extents[a];
                    int ia = (a == d) ? pos_d : idx[a];
                    f = f * ext + ia;
                }
                return f;
            };
            bool negate = (d != n - 1);  // later passes transform w = -g
            for (int i = 0; i < m; ++i) {
                double v = cur[flat_of(i, false)];
                line_in[i] = negate ? -v : v;  // -(-inf) = +inf marks an empty line
            }
            legendre_line(xs, line_in, ys, line_out);
            for (int j = 0; j < md; ++j) next[flat_of(j, true)] = line_out[j];
        }
        cur.swap(next);
    }
    SampledConvexFunction out;
    out.grid = dg;
    out.values = std::move(cur);
    // A fully infinite input line yields -inf marks; they never survive when
    // some finite value exists anywhere, except in pathological empty slices.
    for (double& v : out.values)
        if (v == -kInf) v = kInf;
    return out;
}

SampledConvexFunction biconjugate(const SampledConvexFunction& u) {
    auto dual = DualGridSpec::auto_sized(u);
    auto star = conjugate_sampled(u, dual);
    DualGridSpec back;
    back.grid = u.grid;
    return conjugate_sampled(star, back);
}

double epigraph_support_check(const MaxAffineFunction& u, const std::vector<Vec>& ys) {
    auto star = conjugate_pl(u);
    auto verts = pl_subdivision_vertices(u);
    double umax = -kInf;
    for (const auto& v : verts) umax = std::max(umax, u.raw_max(v));
    // truncated epigraph K = epi(u) cut at height max u: lower vertices
    // (x_v, u(x_v)) plus domain vertices lifted to umax
    std::vector<std::pair<Vec, double>> kverts;
    for (const auto& v : verts) kverts.push_back({v, u.raw_max(v)});
    for (const auto& v : u.domain.vertices()) kverts.push_back({v, umax});
    double gap = 0;
    for (const auto& y : ys) {
        double h = -kInf;
        for (const auto& [x, t] : kverts) h = std::max(h, dot(y, x) - t);
        gap = std::max(gap, std::fabs(star.raw_max(y) - h));
    }
    return gap;
}

}  // namespace fasa
