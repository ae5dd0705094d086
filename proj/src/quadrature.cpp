#include "fasa/quadrature.hpp"

#include <algorithm>

namespace fasa {

QuadOptions QuadOptions::defaults(int n) {
    QuadOptions o;
    if (n == 1) {
        o.base_per_axis = 64;
        o.max_depth = 44;
        o.max_depth_boundary = 44;
        o.eval_budget = 4'000'000;
    } else if (n == 2) {
        o.base_per_axis = 32;
        o.max_depth = 13;
        o.max_depth_boundary = 12;
        o.eval_budget = 40'000'000;
    } else {
        o.base_per_axis = 8;
        o.max_depth = 9;
        o.max_depth_boundary = 7;
        o.eval_budget = 40'000'000;
    }
    return o;
}

QuadOptions QuadOptions::resolved(int n) const {
    QuadOptions o = *this;
    QuadOptions d = defaults(n);
    if (o.base_per_axis <= 0) o.base_per_axis = d.base_per_axis;
    if (o.max_depth <= 0) o.max_depth = d.max_depth;
    if (o.max_depth_boundary <= 0) o.max_depth_boundary = d.max_depth_boundary;
    if (o.eval_budget <= 0) o.eval_budget = d.eval_budget;
    return o;
}

namespace {

enum class CellClass { inside, outside, straddle };

CellClass classify(const Domain& dom, const Box& cell) {
    if (dom.shape == Domain::Shape::all_space) return CellClass::inside;
    if (dom.shape == Domain::Shape::ball) {
        // nearest point of the cell to the center
        double d2 = 0;
        for (int i = 0; i < cell.dim(); ++i) {
            double c = std::clamp(dom.center[i], cell.lo[i], cell.hi[i]);
            d2 += (c - dom.center[i]) * (c - dom.center[i]);
        }
        if (d2 > dom.radius * dom.radius) return CellClass::outside;
        bool all_in = true;
        for (const auto& c : cell.corners())
            if (dist(c, dom.center) > dom.radius) {
                all_in = false;
                break;
            }
        return all_in ? CellClass::inside : CellClass::straddle;
    }
    auto corners = cell.corners();
    for (const auto& h : dom.poly.halfspaces()) {
        bool all_violate = true;
        for (const auto& c : corners)
            if (h.slack(c) >= 0) {
                all_violate = false;
                break;
            }
        if (all_violate) return CellClass::outside;
    }
    bool all_in = true;
    for (const auto& c : corners)
        if (!dom.poly.contains(c, 0.0)) {
            all_in = false;
            break;
        }
    return all_in ? CellClass::inside : CellClass::straddle;
}

struct Worker {
    const Domain& dom;
    const std::function<double(const Vec&)>& f;
    QuadOptions opt;
    double tol_total = 0;
    double total_vol = 1;
    QuadResult res;

    double eval(const Vec& x) {
        ++res.evals;
        return f(x);
    }

    void split(const Box& cell, std::array<Box, 8>& kids, int& count) const {
        int n = cell.dim();
        count = 1 << n;
        Vec mid = cell.center();
        for (int mask = 0; mask < count; ++mask) {
            Box k = cell;
            for (int i = 0; i < n; ++i) {
                if (mask & (1 << i))
                    k.lo[i] = mid[i];
                else
                    k.hi[i] = mid[i];
            }
            kids[mask] = k;
        }
    }

    // Straddling cell at the bisection cap: inside fraction from a 3^n
    // subgrid, value from the deepest interior subpoint.
    void residual(const Box& cell) {
        int n = cell.dim();
        int total = 1;
        for (int i = 0; i < n; ++i) total *= 3;
        int cin = 0;
        double best_margin = -kInf;
        Vec best = cell.center();
        for (int code = 0; code < total; ++code) {
            int c = code;
            Vec x = cell.lo;
            Vec ext = cell.extent();
            for (int i = 0; i < n; ++i) {
                int t = c % 3;
                c /= 3;
                x[i] += ext[i] * (2.0 * t + 1.0) / 6.0;
            }
            double mg = dom.margin(x);
            if (mg > 0) {
                ++cin;
                if (mg > best_margin) {
                    best_margin = mg;
                    best = x;
                }
            }
        }
        double vol = cell.volume();
        if (cin == 0) {
            res.error_estimate += vol * tol_total / std::max(total_vol, 1e-300);
            return;
        }
        double val = eval(best);
        double contrib = val * vol * cin / total;
        res.value += contrib;
        res.boundary_residual += std::fabs(contrib);
        res.error_estimate += std::fabs(val) * vol * (cin + 1.0) / total;
    }

    // center_val: midpoint value already computed by the parent (NaN = unknown)
    void cell(const Box& c, int depth, double center_val) {
        CellClass cls = classify(dom, c);
        if (cls == CellClass::outside) return;
        if (cls == CellClass::straddle) {
            if (depth >= opt.max_depth_boundary || res.evals > opt.eval_budget) {
                residual(c);
                return;
            }
            std::array<Box, 8> kids;
            int count;
            split(c, kids, count);
            for (int i = 0; i < count; ++i) cell(kids[i], depth + 1, kNaN);
            return;
        }
        double vol = c.volume();
        double fc = std::isnan(center_val) ? eval(c.center()) : center_val;
        double v1 = fc * vol;
        std::array<Box, 8> kids;
        int count;
        split(c, kids, count);
        std::array<double, 8> kid_vals{};
        double v2 = 0;
        for (int i = 0; i < count; ++i) {
            kid_vals[i] = eval(kids[i].center());
            v2 += kid_vals[i];
        }
        v2 *= vol / count;
        double delta = std::fabs(v2 - v1);
        double cell_tol =
            std::max(tol_total * vol / std::max(total_vol, 1e-300),
                     opt.cell_rel_tol * std::fabs(v2));
        if (delta <= cell_tol || depth + 1 >= opt.max_depth || res.evals > opt.eval_budget) {
            res.value += v2 + (v2 - v1) / 3.0;  // midpoint Richardson step
            res.error_estimate += delta / 3.0;
            if (delta > 8 * cell_tol) res.converged = false;
            return;
        }
        for (int i = 0; i < count; ++i) cell(kids[i], depth + 1, kid_vals[i]);
    }

    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace

QuadResult integrate(const Domain& region, const std::optional<Box>& clip,
                     const std::function<double(const Vec&)>& f, QuadOptions opt_in) {
    int n = region.dim();
    QuadOptions opt = opt_in.resolved(n);

    Box bounds = region.bounding_box();
    if (clip) {
        auto isect = bounds.intersect(*clip);
        if (!isect) return {};
        bounds = *isect;
    }
    require(std::isfinite(bounds.volume()), "integrate: unbounded integration region");
    if (bounds.volume() <= 0) return {};

    Worker w{region, f, opt, 0, bounds.volume(), {}};

    // scale pass: coarse mean of |f| fixes an absolute tolerance
    GridSpec coarse = GridSpec::over(bounds, opt.base_per_axis + 1);
    Vec h = coarse.spacing();
    double s0 = 0;
    long long inside = 0;
    for (long long fl = 0; fl < coarse.node_count(); ++fl) {
        Vec x = coarse.node(fl);
        for (int i = 0; i < n; ++i) x[i] += 0.5 * h[i];  // cell centers
        bool in_range = true;
        auto idx = coarse.unflat(fl);
        for (int i = 0; i < n; ++i)
            if (idx[i] + 1 >= coarse.m) in_range = false;
        if (!in_range) continue;
        if (region.margin(x) <= 0) continue;
        s0 += std::fabs(w.eval(x));
        ++inside;
    }
    double mean_f = inside > 0 ? s0 / inside : 1.0;
    w.tol_total = opt.rel_tol * std::max(mean_f * bounds.volume(), 1e-12);

    // base cells
    GridSpec base = GridSpec::over(bounds, opt.base_per_axis + 1);
    Vec bh = base.spacing();
    std::array<int, kMaxDim> idx{};
    std::function<void(int)> walk = [&](int axis) {
        if (axis == n) {
            Box c;
            c.lo = base.lo;
            c.hi = base.lo;
            for (int i = 0; i < n; ++i) {
                c.lo[i] = base.lo[i] + idx[i] * bh[i];
                c.hi[i] = c.lo[i] + bh[i];
            }
            w.cell(c, 0, Worker::kNaN);
            return;
        }
        for (idx[axis] = 0; idx[axis] < base.m - 1; ++idx[axis]) walk(axis + 1);
    };
    walk(0);

    if (w.res.evals > opt.eval_budget) w.res.converged = false;
    return w.res;
}

}  // namespace fasa
