#include "fasa/geometry.hpp"

#include <algorithm>
#include <cstdlib>

namespace fasa {

std::vector<Vec> Box::corners() const {
    int n = dim();
    std::vector<Vec> cs;
    cs.reserve(1u << n);
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec c = lo;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) c[i] = hi[i];
        cs.push_back(c);
    }
    return cs;
}

Box Box::cube(int n, double lo1, double hi1) {
    Vec lo = Vec::zero(n), hi = Vec::zero(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = lo1;
        hi[i] = hi1;
    }
    return Box{lo, hi};
}

GridSpec GridSpec::make(int n, Vec lo, Vec hi, int m) {
    require(n >= 1 && n <= kMaxDim, "GridSpec: dimension must be 1..3");
    require(lo.dim() == n && hi.dim() == n, "GridSpec: corner dimension mismatch");
    require(m >= 2, "GridSpec: need at least 2 nodes per axis");
    for (int i = 0; i < n; ++i)
        require(lo[i] < hi[i], "GridSpec: lower corner must be strictly below upper");
    GridSpec g;
    g.n = n;
    g.lo = lo;
    g.hi = hi;
    g.m = m;
    return g;
}

static double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::vector<Vec> convex_hull_2d(std::vector<Vec> pts) {
    if (pts.size() < 2) return pts;
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec& a, const Vec& b) {
                              return a[0] == b[0] && a[1] == b[1];
                          }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double polygon_area(const std::vector<Vec>& ccw) {
    if (ccw.size() < 3) return 0.0;
    double a = 0;
    for (size_t i = 0; i < ccw.size(); ++i) {
        const Vec& p = ccw[i];
        const Vec& q = ccw[(i + 1) % ccw.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

double hull_area_2d(const std::vector<Vec>& pts) {
    return polygon_area(convex_hull_2d(pts));
}

std::optional<Vec> intersect_lines(const Vec& a1, double b1, const Vec& a2, double b2,
                                   double tol) {
    double det = a1[0] * a2[1] - a1[1] * a2[0];
    double scale = norm(a1) * norm(a2);
    if (std::fabs(det) <= tol * std::max(1.0, scale)) return std::nullopt;
    return Vec{(b1 * a2[1] - b2 * a1[1]) / det, (a1[0] * b2 - a2[0] * b1) / det};
}

DomainPolytope DomainPolytope::box(const Box& b) {
    int n = b.dim();
    DomainPolytope p;
    p.n_ = n;
    for (int i = 0; i < n; ++i) {
        require(b.lo[i] <= b.hi[i], "DomainPolytope::box: inverted box");
        Vec e = Vec::zero(n);
        e[i] = 1;
        p.hs_.push_back({e, b.hi[i]});
        e[i] = -1;
        p.hs_.push_back({e, -b.lo[i]});
    }
    p.verts_ = b.corners();
    if (n == 2) p.verts_ = convex_hull_2d(p.verts_);
    return p;
}

DomainPolytope DomainPolytope::interval(double lo, double hi) {
    require(lo <= hi, "DomainPolytope::interval: inverted interval");
    DomainPolytope p;
    p.n_ = 1;
    p.hs_.push_back({Vec{1}, hi});
    p.hs_.push_back({Vec{-1}, -lo});
    p.verts_.push_back(Vec{lo});
    if (hi > lo) p.verts_.push_back(Vec{hi});
    return p;
}

DomainPolytope DomainPolytope::point(const Vec& p0) {
    if (p0.dim() == 1) return interval(p0[0], p0[0]);
    int n = p0.dim();
    DomainPolytope p;
    p.n_ = n;
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::zero(n);
        e[i] = 1;
        p.hs_.push_back({e, p0[i]});
        e[i] = -1;
        p.hs_.push_back({e, -p0[i]});
    }
    p.verts_.push_back(p0);
    return p;
}

DomainPolytope DomainPolytope::from_halfspaces(int n, std::vector<Halfspace> hs) {
    require(n >= 1 && n <= 2, "from_halfspaces: vertex enumeration only for n <= 2");
    require(!hs.empty(), "from_halfspaces: empty system");
    DomainPolytope p;
    p.n_ = n;
    p.hs_ = std::move(hs);
    if (n == 1) {
        double lo = -kInf, hi = kInf;
        for (const auto& h : p.hs_) {
            require(std::fabs(h.a[0]) > 1e-14, "from_halfspaces: zero normal");
            double r = h.b / h.a[0];
            if (h.a[0] > 0)
                hi = std::min(hi, r);
            else
                lo = std::max(lo, r);
        }
        require(std::isfinite(lo) && std::isfinite(hi), "from_halfspaces: unbounded interval");
        require(lo <= hi + 1e-12, "from_halfspaces: empty interval");
        hi = std::max(hi, lo);
        p.verts_.push_back(Vec{lo});
        if (hi > lo) p.verts_.push_back(Vec{hi});
        return p;
    }
    // Boundedness: facet normals must positively span R^2 (max angular gap < pi).
    std::vector<double> angles;
    for (const auto& h : p.hs_) {
        require(norm(h.a) > 1e-14, "from_halfspaces: zero normal");
        angles.push_back(std::atan2(h.a[1], h.a[0]));
    }
    std::sort(angles.begin(), angles.end());
    double max_gap = 2 * M_PI - (angles.back() - angles.front());
    for (size_t i = 0; i + 1 < angles.size(); ++i)
        max_gap = std::max(max_gap, angles[i + 1] - angles[i]);
    require(max_gap < M_PI - 1e-12, "from_halfspaces: unbounded polytope");

    std::vector<Vec> vs;
    const double feas = 1e-9;
    for (size_t i = 0; i < p.hs_.size(); ++i) {
        for (size_t j = i + 1; j < p.hs_.size(); ++j) {
            auto q = intersect_lines(p.hs_[i].a, p.hs_[i].b, p.hs_[j].a, p.hs_[j].b);
            if (!q) continue;
            bool ok = true;
            for (const auto& h : p.hs_)
                if (h.slack(*q) < -feas * (1.0 + std::fabs(h.b))) {
                    ok = false;
                    break;
                }
            if (ok) vs.push_back(*q);
        }
    }
    require(!vs.empty(), "from_halfspaces: empty polytope");
    p.verts_ = convex_hull_2d(vs);
    if (p.verts_.empty()) p.verts_ = {vs[0]};
    return p;
}

DomainPolytope DomainPolytope::from_points(int n, const std::vector<Vec>& pts) {
    require(n >= 1 && n <= 2, "from_points: hull construction only for n <= 2");
    require(!pts.empty(), "from_points: no points");
    DomainPolytope p;
    p.n_ = n;
    if (n == 1) {
        double lo = pts[0][0], hi = pts[0][0];
        for (const auto& q : pts) {
            lo = std::min(lo, q[0]);
            hi = std::max(hi, q[0]);
        }
        return interval(lo, hi);
    }
    std::vector<Vec> hull = convex_hull_2d(pts);
    if (hull.size() >= 3) {
        p.verts_ = hull;
        for (size_t i = 0; i < hull.size(); ++i) {
            const Vec& a = hull[i];
            const Vec& b = hull[(i + 1) % hull.size()];
            Vec nrm{b[1] - a[1], -(b[0] - a[0])};  // outward for CCW
            double len = norm(nrm);
            if (len < 1e-14) continue;
            nrm = (1.0 / len) * nrm;
            p.hs_.push_back({nrm, dot(nrm, a)});
        }
        return p;
    }
    // Degenerate: point or segment embedded in the plane.
    if (hull.size() == 1 || (hull.size() == 2 && dist(hull[0], hull[1]) < 1e-14))
        return point(hull[0]);
    const Vec a = hull[0], b = hull[1];
    Vec d = b - a;
    double len = norm(d);
    d = (1.0 / len) * d;
    Vec nrm{-d[1], d[0]};
    p.verts_ = {a, b};
    p.hs_.push_back({nrm, dot(nrm, a)});
    p.hs_.push_back({-1.0 * nrm, -dot(nrm, a)});
    p.hs_.push_back({d, dot(d, b)});
    p.hs_.push_back({-1.0 * d, -dot(d, a)});
    return p;
}

bool DomainPolytope::contains(const Vec& x, double tol) const {
    for (const auto& h : hs_)
        if (h.slack(x) < -tol * (1.0 + std::fabs(h.b))) return false;
    return true;
}

double DomainPolytope::margin(const Vec& x) const {
    double m = kInf;
    for (const auto& h : hs_) m = std::min(m, h.slack(x) / std::max(norm(h.a), 1e-300));
    return m;
}

double DomainPolytope::volume() const {
    if (verts_.empty()) return 0.0;
    if (n_ == 1) {
        double lo = verts_[0][0], hi = verts_[0][0];
        for (const auto& v : verts_) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        return hi - lo;
    }
    if (n_ == 2) return std::fabs(polygon_area(convex_hull_2d(verts_)));
    // n = 3: axis boxes only (exact polyhedral paths stop at n = 2).
    Box bb = bounding_box();
    for (const auto& v : verts_)
        for (int i = 0; i < n_; ++i)
            require(std::fabs(v[i] - bb.lo[i]) < 1e-9 || std::fabs(v[i] - bb.hi[i]) < 1e-9,
                    "DomainPolytope::volume: 3-D volume supported for boxes only");
    return bb.volume();
}

int DomainPolytope::affine_dim(double tol) const {
    if (verts_.size() <= 1) return 0;
    const Vec& v0 = verts_[0];
    std::vector<Vec> dirs;
    for (size_t i = 1; i < verts_.size(); ++i) {
        Vec d = verts_[i] - v0;
        if (norm(d) > tol) dirs.push_back(d);
    }
    if (dirs.empty()) return 0;
    if (n_ == 1) return 1;
    // rank of the direction set (n <= 3)
    Vec d0 = dirs[0];
    for (size_t i = 1; i < dirs.size(); ++i) {
        const Vec& d = dirs[i];
        if (n_ == 2) {
            if (std::fabs(d0[0] * d[1] - d0[1] * d[0]) > tol * (norm(d0) * norm(d) + 1))
                return 2;
        } else {
            // check rank 2 then 3
            Vec c{d0[1] * d[2] - d0[2] * d[1], d0[2] * d[0] - d0[0] * d[2],
                  d0[0] * d[1] - d0[1] * d[0]};
            if (norm(c) > tol * (norm(d0) * norm(d) + 1)) {
                for (size_t j = i + 1; j < dirs.size(); ++j)
                    if (std::fabs(dot(c, dirs[j])) > tol * (norm(c) * norm(dirs[j]) + 1))
                        return 3;
                return 2;
            }
        }
    }
    return 1;
}

Box DomainPolytope::bounding_box() const {
    require(!verts_.empty(), "bounding_box: no vertices");
    Vec lo = verts_[0], hi = verts_[0];
    for (const auto& v : verts_)
        for (int i = 0; i < n_; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    return Box{lo, hi};
}

Vec DomainPolytope::centroid() const {
    Vec c = Vec::zero(n_);
    for (const auto& v : verts_) c = c + v;
    return (1.0 / static_cast<double>(verts_.size())) * c;
}

double DomainPolytope::circumradius() const {
    double r = 0;
    for (const auto& v : verts_) r = std::max(r, norm(v));
    return r;
}

}  // namespace fasa
