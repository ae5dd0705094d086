#include "fasa/subgrad_ma.hpp"

#include <algorithm>
#include <cstdio>

#include "fasa/quadrature.hpp"

namespace fasa {

SubdifferentialSet subdifferential_pl(const MaxAffineFunction& u, const Vec& x) {
    SubdifferentialSet s;
    if (!u.finite_valued && !u.domain.contains(x)) return s;  // empty outside dom
    for (int i : u.active_pieces(x)) {
        const Vec& a = u.slopes[i];
        bool dup = false;
        for (const auto& p : s.hull_points)
            if (dist(p, a) <= 1e-12 * (1 + norm(a))) {
                dup = true;
                break;
            }
        if (!dup) s.hull_points.push_back(a);
    }
    if (!u.finite_valued) {
        for (const auto& h : u.domain.halfspaces()) {
            double nr = norm(h.a);
            if (nr < 1e-14) continue;
            if (h.slack(x) <= 1e-9 * (1 + std::fabs(h.b))) {
                Vec g = (1.0 / nr) * h.a;
                bool dup = false;
                for (const auto& r : s.recession)
                    if (dist(r, g) <= 1e-12) {
                        dup = true;
                        break;
                    }
                if (!dup) s.recession.push_back(g);
            }
        }
    }
    return s;
}

double MongeAmpereMeasure::total_atom_mass() const {
    std::vector<double> ms;
    ms.reserve(atoms.size());
    for (const auto& a : atoms) ms.push_back(a.mass);
    return pairwise_sum(ms);
}

double MongeAmpereMeasure::atom_mass_in(const Box& b) const {
    std::vector<double> ms;
    for (const auto& a : atoms)
        if (b.contains(a.x, 1e-12)) ms.push_back(a.mass);
    return pairwise_sum(ms);
}

double MongeAmpereMeasure::density_integral(const Box& b) const {
    if (!density_grid) return 0.0;
    const GridSpec& g = *density_grid;
    Vec h = g.spacing();
    std::vector<double> parts;
    long long cells = 1;
    for (int i = 0; i < g.n; ++i) cells *= (g.m - 1);
    for (long long ci = 0; ci < cells; ++ci) {
        long long t = ci;
        double overlap = 1.0;
        Vec lo = g.lo;
        for (int i = g.n - 1; i >= 0; --i) {
            int k = static_cast<int>(t % (g.m - 1));
            t /= (g.m - 1);
            lo[i] = g.lo[i] + k * h[i];
            double a = std::max(lo[i], b.lo[i]);
            double bb2 = std::min(lo[i] + h[i], b.hi[i]);
            overlap *= std::max(bb2 - a, 0.0);
        }
        if (overlap > 0 && density[ci] != 0) parts.push_back(density[ci] * overlap);
    }
    return pairwise_sum(parts);
}

double MongeAmpereMeasure::total_mass() const {
    double d = 0;
    if (density_grid) d = density_integral(density_grid->box());
    return total_atom_mass() + d;
}

MongeAmpereMeasure ma_atoms_pl(const MaxAffineFunction& v) {
    require(v.finite_valued,
            "ma_atoms_pl: input must be finite-valued (a conjugate produced by conjugate_pl)");
    if (v.dim() > 2)
        fail("ma_atoms_pl: unsupported dimension (n >= 3); use ma_box_montecarlo");
    MongeAmpereMeasure mu;
    double slope_scale = 0;
    for (const auto& a : v.slopes) slope_scale = std::max(slope_scale, norm(a));
    double mass_tol = 1e-13 * (1.0 + slope_scale * slope_scale);

    auto verts = pl_subdivision_vertices(v);
    for (const auto& p0 : verts) {
        auto act = v.active_pieces(p0);
        if (act.size() < 2) continue;
        // refine the vertex from the best-conditioned tie equations among the
        // active pieces (the enumeration pair may be nearly parallel)
        Vec p = p0;
        if (v.dim() == 1) {
            int ilo = act[0], ihi = act[0];
            for (int i : act) {
                if (v.slopes[i][0] < v.slopes[ilo][0]) ilo = i;
                if (v.slopes[i][0] > v.slopes[ihi][0]) ihi = i;
            }
            double da = v.slopes[ihi][0] - v.slopes[ilo][0];
            if (da > 1e-12) {
                double x = (v.intercepts[ilo] - v.intercepts[ihi]) / da;
                if (std::fabs(x - p0[0]) <= 1e-5 * (1 + std::fabs(p0[0]))) p = Vec{x};
            }
        } else if (act.size() >= 3) {
            int anchor = act[0];
            double best1 = 0;
            int i1 = -1;
            for (int i : act) {
                double nr = norm(v.slopes[i] - v.slopes[anchor]);
                if (nr > best1) {
                    best1 = nr;
                    i1 = i;
                }
            }
            if (i1 >= 0) {
                Vec r1 = v.slopes[i1] - v.slopes[anchor];
                double best2 = 0;
                int i2 = -1;
                for (int i : act) {
                    Vec r = v.slopes[i] - v.slopes[anchor];
                    double nr = norm(r);
                    if (nr < 1e-12) continue;
                    double s = std::fabs(r1[0] * r[1] - r1[1] * r[0]) / nr;
                    if (s > best2) {
                        best2 = s;
                        i2 = i;
                    }
                }
                if (i2 >= 0) {
                    auto q = intersect_lines(
                        r1, v.intercepts[anchor] - v.intercepts[i1],
                        v.slopes[i2] - v.slopes[anchor],
                        v.intercepts[anchor] - v.intercepts[i2]);
                    if (q && dist(*q, p0) <= 1e-5 * (1 + norm(p0))) p = *q;
                }
            }
        }
        double mass = 0;
        if (v.dim() == 1) {
            double lo = kInf, hi = -kInf;
            for (int i : act) {
                lo = std::min(lo, v.slopes[i][0]);
                hi = std::max(hi, v.slopes[i][0]);
            }
            mass = hi - lo;
        } else {
            std::vector<Vec> sl;
            for (int i : act) sl.push_back(v.slopes[i]);
            mass = hull_area_2d(sl);
        }
        if (mass > mass_tol) mu.atoms.push_back({p, mass});
    }
    for (const auto& a : mu.atoms) mu.support_radius = std::max(mu.support_radius, norm(a.x));
    return mu;
}

MongeAmpereMeasure ma_density_smooth(const SmoothConvexSpec& spec, const GridSpec& grid) {
    Box db = spec.domain.bounding_box();
    for (int i = 0; i < grid.n; ++i)
        require(grid.lo[i] <= db.lo[i] + 1e-12 && grid.hi[i] >= db.hi[i] - 1e-12,
                "ma_density_smooth: grid does not cover the domain");
    MongeAmpereMeasure mu;
    mu.density_grid = grid;
    Vec h = grid.spacing();
    double h_fd = std::max(1e-4, grid.min_spacing() / 4.0);
    long long cells = 1;
    for (int i = 0; i < grid.n; ++i) cells *= (grid.m - 1);
    mu.density.assign(cells, 0.0);
    double half_diag = 0.5 * norm(h);
    for (long long ci = 0; ci < cells; ++ci) {
        long long t = ci;
        Vec c = grid.lo;
        for (int i = grid.n - 1; i >= 0; --i) {
            int k = static_cast<int>(t % (grid.m - 1));
            t /= (grid.m - 1);
            c[i] = grid.lo[i] + (k + 0.5) * h[i];
        }
        if (!spec.domain.contains(c, 0.0)) continue;
        Mat H = spec.hessian(c, h_fd);
        double det = H.det();
        double eps_psd = 1e-8 * (1.0 + H.frobenius());
        if (det < -eps_psd) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "ma_density_smooth: convexity violation, det Hess = %g < 0", det);
            fail(buf);
        }
        mu.density[ci] = std::max(det, 0.0);
        if (mu.density[ci] > 1e-12)
            mu.support_radius = std::max(mu.support_radius, norm(c) + half_diag);
    }
    if (auto r = spec.support_radius()) mu.support_radius = std::min(mu.support_radius, *r);
    return mu;
}

double ma_box(const Specimen& v, const Box& b) {
    if (const auto* pl = as_pl(v)) {
        if (pl->dim() >= 3)
            fail("ma_box: PL measures in dimension >= 3 are Monte-Carlo only; "
                 "use ma_box_montecarlo");
        require(pl->finite_valued,
                "ma_box: PL input must be finite-valued (conjugate form)");
        return ma_atoms_pl(*pl).atom_mass_in(b);
    }
    const auto& s = std::get<SmoothConvexSpec>(v);
    double h_fd = std::max(1e-4, 0.25 * b.extent()[0] / 64.0);
    auto res = integrate(s.domain, b, [&](const Vec& x) { return s.det_hess(x, h_fd); });
    return res.value;
}

static double hull_volume_1d(const std::vector<Vec>& pts) {
    double lo = kInf, hi = -kInf;
    for (const auto& p : pts) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    }
    return pts.empty() ? 0.0 : hi - lo;
}

static Vec cross3(const Vec& a, const Vec& b) {
    return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Volume of conv(pts) in R^3 via support-plane enumeration; points are few
// (distinct PL slopes), so brute force over triples is fine.
static double hull_volume_3d(std::vector<Vec> pts) {
    // dedupe
    std::vector<Vec> P;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : P)
            if (dist(p, q) < 1e-12 * (1 + norm(p))) {
                dup = true;
                break;
            }
        if (!dup) P.push_back(p);
    }
    if (P.size() < 4) return 0.0;
    Vec c = Vec::zero(3);
    for (const auto& p : P) c = c + p;
    c = (1.0 / static_cast<double>(P.size())) * c;

    struct Plane {
        Vec n;
        double off;
    };
    std::vector<Plane> planes;
    double scale = 0;
    for (const auto& p : P) scale = std::max(scale, norm(p - c));
    double tol = 1e-9 * (1 + scale);
    for (size_t i = 0; i < P.size(); ++i)
        for (size_t j = i + 1; j < P.size(); ++j)
            for (size_t k = j + 1; k < P.size(); ++k) {
                Vec n = cross3(P[j] - P[i], P[k] - P[i]);
                double nn = norm(n);
                if (nn < tol * scale) continue;
                n = (1.0 / nn) * n;
                double off = dot(n, P[i]);
                if (dot(n, c) > off) {
                    n = -1.0 * n;
                    off = -off;
                }
                bool face = true;
                for (const auto& q : P)
                    if (dot(n, q) > off + tol) {
                        face = false;
                        break;
                    }
                if (!face) continue;
                bool dup = false;
                for (const auto& pl : planes)
                    if (dist(pl.n, n) < 1e-7 && std::fabs(pl.off - off) < tol) {
                        dup = true;
                        break;
                    }
                if (!dup) planes.push_back({n, off});
            }
    double vol = 0;
    for (const auto& pl : planes) {
        // polygon of points on the plane, ordered around its centroid
        std::vector<Vec> on;
        for (const auto& q : P)
            if (std::fabs(dot(pl.n, q) - pl.off) <= 2 * tol) on.push_back(q);
        if (on.size() < 3) continue;
        Vec fc = Vec::zero(3);
        for (const auto& q : on) fc = fc + q;
        fc = (1.0 / static_cast<double>(on.size())) * fc;
        Vec u_ax = on[0] - fc;
        if (norm(u_ax) < tol) continue;
        u_ax = (1.0 / norm(u_ax)) * u_ax;
        Vec v_ax = cross3(pl.n, u_ax);
        std::sort(on.begin(), on.end(), [&](const Vec& a, const Vec& b) {
            return std::atan2(dot(a - fc, v_ax), dot(a - fc, u_ax)) <
                   std::atan2(dot(b - fc, v_ax), dot(b - fc, u_ax));
        });
        for (size_t i = 1; i + 1 < on.size(); ++i) {
            Vec e1 = on[i] - on[0], e2 = on[i + 1] - on[0], e3 = c - on[0];
            vol += std::fabs(dot(e3, cross3(e1, e2))) / 6.0;
        }
    }
    return vol;
}

MonteCarloEstimate ma_box_montecarlo(const MaxAffineFunction& v, const Box& b,
                                     long long samples, RandomStream rng) {
    require(v.finite_valued, "ma_box_montecarlo: input must be finite-valued");
    int n = v.dim();
    const int batches = 10;
    long long per_batch = std::max<long long>(samples / batches, 8);
    std::vector<double> est(batches, 0.0);
    uint64_t counter = 0;
    for (int bt = 0; bt < batches; ++bt) {
        std::vector<Vec> grads;
        for (long long s = 0; s < per_batch; ++s) {
            Vec x = Vec::zero(n);
            for (int i = 0; i < n; ++i)
                x[i] = b.lo[i] + (b.hi[i] - b.lo[i]) * rng.at(counter++);
            double best = -kInf;
            size_t bi = 0;
            for (size_t i = 0; i < v.slopes.size(); ++i) {
                double val = dot(v.slopes[i], x) + v.intercepts[i];
                if (val > best) {
                    best = val;
                    bi = i;
                }
            }
            grads.push_back(v.slopes[bi]);
        }
        if (n == 1)
            est[bt] = hull_volume_1d(grads);
        else if (n == 2)
            est[bt] = hull_area_2d(grads);
        else
            est[bt] = hull_volume_3d(grads);
    }
    MonteCarloEstimate mc;
    mc.samples = per_batch * batches;
    double mean = pairwise_sum(est) / batches;
    double var = 0;
    for (double e : est) var += (e - mean) * (e - mean);
    var /= (batches - 1);
    mc.value = mean;
    mc.std_error = std::sqrt(var / batches);
    mc.ci95_half = 1.96 * mc.std_error;
    return mc;
}

MassCheck total_mass_check(const MaxAffineFunction& u) {
    require(u.dim() <= 2, "total_mass_check: exact path only for n <= 2");
    MassCheck mc;
    auto star = conjugate_pl(u);
    mc.lhs = ma_atoms_pl(star).total_atom_mass();
    mc.rhs = u.domain.volume();
    mc.gap = std::fabs(mc.lhs - mc.rhs);
    return mc;
}

double subdiff_duality_check(const MaxAffineFunction& u,
                             const std::vector<std::pair<Vec, Vec>>& pairs) {
    auto star = conjugate_pl(u);
    double worst = 0;
    for (const auto& [x, p] : pairs) {
        double viol = std::fabs(u.value(x) + star.raw_max(p) - dot(x, p));
        worst = std::max(worst, viol);
    }
    return worst;
}

double ma_integral(const Specimen& v, const TestFunction& beta) {
    if (const auto* pl = as_pl(v)) {
        auto mu = ma_atoms_pl(*pl);
        std::vector<double> parts;
        for (const auto& a : mu.atoms)
            if (beta.support.contains(a.x)) parts.push_back(beta.f(a.x) * a.mass);
        return pairwise_sum(parts);
    }
    const auto& s = std::get<SmoothConvexSpec>(v);
    auto res = integrate(s.domain, beta.support,
                         [&](const Vec& x) { return beta.f(x) * s.det_hess(x); });
    return res.value;
}

double ma_support_radius(const Specimen& v) {
    if (const auto* pl = as_pl(v)) {
        if (!pl->finite_valued) return pl->domain.circumradius();
        return ma_atoms_pl(*pl).support_radius;
    }
    const auto& s = std::get<SmoothConvexSpec>(v);
    if (auto r = s.support_radius()) return *r;
    if (!s.domain.is_all_space()) {
        Box bb = s.domain.bounding_box();
        double r = 0;
        for (const auto& c : bb.corners()) r = std::max(r, norm(c));
        return r;
    }
    return kInf;
}

double MongeAmpereFamily::measure_of(const Specimen& v, const Box& b) const {
    return ma_box(v, b);
}

double MongeAmpereFamily::density_at(const Specimen& v, const Vec& x) const {
    if (as_pl(v)) return 0.0;  // PL Monge-Ampere is purely atomic
    const auto& s = std::get<SmoothConvexSpec>(v);
    if (!s.domain.contains(x)) return 0.0;
    return std::max(s.det_hess(x), 0.0);
}

}  // namespace fasa
