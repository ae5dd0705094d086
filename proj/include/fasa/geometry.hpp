#pragma once

#include <optional>

#include "fasa/base.hpp"

namespace fasa {

struct Box {
    Vec lo, hi;

    int dim() const { return lo.dim(); }
    double volume() const {
        double v = 1;
        for (int i = 0; i < dim(); ++i) v *= (hi[i] - lo[i]);
        return v;
    }
    Vec center() const { return 0.5 * (lo + hi); }
    Vec extent() const { return hi - lo; }
    bool contains(const Vec& x, double tol = 1e-12) const {
        for (int i = 0; i < dim(); ++i)
            if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
        return true;
    }
    Box inflated(double pad) const {
        Box b = *this;
        for (int i = 0; i < dim(); ++i) {
            b.lo[i] -= pad;
            b.hi[i] += pad;
        }
        return b;
    }
    std::optional<Box> intersect(const Box& o) const {
        Box r = *this;
        for (int i = 0; i < dim(); ++i) {
            r.lo[i] = std::max(lo[i], o.lo[i]);
            r.hi[i] = std::min(hi[i], o.hi[i]);
            if (r.lo[i] >= r.hi[i]) return std::nullopt;
        }
        return r;
    }
    std::vector<Vec> corners() const;
    static Box of(double lo1, double hi1) { return Box{Vec{lo1}, Vec{hi1}}; }
    static Box cube(int n, double lo1, double hi1);
};

// Uniform node grid over a box: m nodes per axis, spacing (hi-lo)/(m-1).
struct GridSpec {
    int n = 1;
    Vec lo, hi;
    int m = 2;

    static GridSpec make(int n, Vec lo, Vec hi, int m);
    static GridSpec over(const Box& b, int m) { return make(b.dim(), b.lo, b.hi, m); }

    Vec spacing() const {
        Vec h = hi - lo;
        return (1.0 / (m - 1)) * h;
    }
    double min_spacing() const {
        Vec h = spacing();
        double s = h[0];
        for (int i = 1; i < n; ++i) s = std::min(s, h[i]);
        return s;
    }
    long long node_count() const {
        long long c = 1;
        for (int i = 0; i < n; ++i) c *= m;
        return c;
    }
    // Row-major: last axis fastest.
    long long flat(const std::array<int, kMaxDim>& idx) const {
        long long f = 0;
        for (int i = 0; i < n; ++i) f = f * m + idx[i];
        return f;
    }
    std::array<int, kMaxDim> unflat(long long f) const {
        std::array<int, kMaxDim> idx{};
        for (int i = n - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(f % m);
            f /= m;
        }
        return idx;
    }
    Vec node(long long f) const {
        auto idx = unflat(f);
        Vec h = spacing();
        Vec x = lo;
        for (int i = 0; i < n; ++i) x[i] += idx[i] * h[i];
        return x;
    }
    Box box() const { return Box{lo, hi}; }
};

struct Halfspace {
    Vec a;
    double b;  // a.x <= b
    double slack(const Vec& x) const { return b - dot(a, x); }
};

// 2-D convex hull (monotone chain); returns CCW vertices, collinear points dropped.
std::vector<Vec> convex_hull_2d(std::vector<Vec> pts);

// Shoelace area of a CCW polygon.
double polygon_area(const std::vector<Vec>& ccw);

// Area of the convex hull of an arbitrary 2-D point set.
double hull_area_2d(const std::vector<Vec>& pts);

// Bounded convex polytope: H-representation plus cached vertices.
// Vertex enumeration is exact for n <= 2; n = 3 supports axis boxes only.
class DomainPolytope {
  public:
    static DomainPolytope box(const Box& b);
    static DomainPolytope interval(double lo, double hi);
    static DomainPolytope from_halfspaces(int n, std::vector<Halfspace> hs);
    static DomainPolytope from_points(int n, const std::vector<Vec>& pts);
    static DomainPolytope point(const Vec& p);

    int dim() const { return n_; }
    const std::vector<Halfspace>& halfspaces() const { return hs_; }
    const std::vector<Vec>& vertices() const { return verts_; }

    bool contains(const Vec& x, double tol = 1e-9) const;
    // min over facets of slack/|a|; > 0 strictly inside, < 0 outside.
    double margin(const Vec& x) const;
    double volume() const;
    int affine_dim(double tol = 1e-9) const;
    Box bounding_box() const;
    Vec centroid() const;
    double circumradius() const;  // max |vertex|

  private:
    int n_ = 1;
    std::vector<Halfspace> hs_;
    std::vector<Vec> verts_;
};

// Solve the 2x2 system (a1.x = b1, a2.x = b2); nullopt if near-singular.
std::optional<Vec> intersect_lines(const Vec& a1, double b1, const Vec& a2, double b2,
                                   double tol = 1e-12);

}  // namespace fasa
