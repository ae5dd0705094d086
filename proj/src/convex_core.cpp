#include "fasa/convex_core.hpp"

#include <algorithm>
#include <cstdio>

namespace fasa {

Domain Domain::polytope(DomainPolytope p) {
    Domain d;
    d.shape = Shape::polytope;
    d.poly = std::move(p);
    return d;
}

Domain Domain::ball(Vec center, double radius) {
    require(radius > 0, "Domain::ball: radius must be positive");
    Domain d;
    d.shape = Shape::ball;
    d.center = center;
    d.radius = radius;
    return d;
}

Domain Domain::all(int n, Box hint) {
    require(hint.dim() == n, "Domain::all: hint dimension mismatch");
    Domain d;
    d.shape = Shape::all_space;
    d.center = Vec::zero(n);
    d.bbox_hint = hint;
    return d;
}

int Domain::dim() const {
    switch (shape) {
        case Shape::polytope: return poly.dim();
        case Shape::ball: return center.dim();
        default: return bbox_hint.dim();
    }
}

bool Domain::contains(const Vec& x, double tol) const {
    switch (shape) {
        case Shape::polytope: return poly.contains(x, tol);
        case Shape::ball: return dist(x, center) <= radius + tol;
        default: return true;
    }
}

double Domain::margin(const Vec& x) const {
    switch (shape) {
        case Shape::polytope: return poly.margin(x);
        case Shape::ball: return radius - dist(x, center);
        default: return kInf;
    }
}

Box Domain::bounding_box() const {
    switch (shape) {
        case Shape::polytope: return poly.bounding_box();
        case Shape::ball: {
            Vec lo = center, hi = center;
            for (int i = 0; i < center.dim(); ++i) {
                lo[i] -= radius;
                hi[i] += radius;
            }
            return Box{lo, hi};
        }
        default: return bbox_hint;
    }
}

double Domain::volume() const {
    switch (shape) {
        case Shape::polytope: return poly.volume();
        case Shape::ball: {
            int n = center.dim();
            if (n == 1) return 2 * radius;
            if (n == 2) return M_PI * radius * radius;
            return 4.0 / 3.0 * M_PI * radius * radius * radius;
        }
        default: return kInf;
    }
}

int Domain::affine_dim() const {
    if (shape == Shape::polytope) return poly.affine_dim();
    return dim();
}

MaxAffineFunction MaxAffineFunction::make(std::vector<Vec> slopes,
                                          std::vector<double> intercepts,
                                          DomainPolytope domain) {
    require(!slopes.empty(), "MaxAffineFunction: piece list must be non-empty");
    require(slopes.size() == intercepts.size(), "MaxAffineFunction: slope/intercept mismatch");
    for (const auto& a : slopes)
        require(a.dim() == domain.dim(), "MaxAffineFunction: slope dimension mismatch");
    MaxAffineFunction u;
    u.slopes = std::move(slopes);
    u.intercepts = std::move(intercepts);
    u.domain = std::move(domain);
    return u;
}

MaxAffineFunction MaxAffineFunction::make_finite(std::vector<Vec> slopes,
                                                 std::vector<double> intercepts, int n) {
    auto u = make(std::move(slopes), std::move(intercepts),
                  DomainPolytope::box(Box::cube(n, -kHugeBox, kHugeBox)));
    u.finite_valued = true;
    return u;
}

MaxAffineFunction MaxAffineFunction::indicator(DomainPolytope domain) {
    int n = domain.dim();
    return make({Vec::zero(n)}, {0.0}, std::move(domain));
}

double MaxAffineFunction::raw_max(const Vec& x) const {
    double m = -kInf;
    for (size_t i = 0; i < slopes.size(); ++i)
        m = std::max(m, dot(slopes[i], x) + intercepts[i]);
    return m;
}

double MaxAffineFunction::value(const Vec& x) const {
    if (!finite_valued && !domain.contains(x)) return kInf;
    return raw_max(x);
}

double MaxAffineFunction::active_tol(double maxval) const {
    return 1e-9 * (1.0 + std::fabs(maxval));
}

std::vector<int> MaxAffineFunction::active_pieces(const Vec& x) const {
    double m = raw_max(x);
    double tol = active_tol(m);
    std::vector<int> act;
    for (size_t i = 0; i < slopes.size(); ++i)
        if (dot(slopes[i], x) + intercepts[i] >= m - tol) act.push_back(static_cast<int>(i));
    return act;
}

// ---------------------------------------------------------------------------
// smooth specimens

SmoothConvexSpec SmoothConvexSpec::quadratic(Mat A, Vec b, double c, Domain dom) {
    int n = dom.dim();
    require(A.n == n && b.dim() == n, "quadratic: parameter dimension mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            require(std::fabs(A(i, j) - A(j, i)) <= 1e-12 * (1 + A.frobenius()),
                    "quadratic: A must be symmetric");
    SmoothConvexSpec s;
    s.kind = SmoothKind::quadratic;
    s.domain = std::move(dom);
    s.A = A;
    s.b = b;
    s.c = c;
    s.label = "quadratic";
    return s;
}

SmoothConvexSpec SmoothConvexSpec::hemisphere(int n, double r) {
    require(r > 0, "hemisphere: radius must be positive");
    SmoothConvexSpec s;
    s.kind = SmoothKind::hemisphere;
    s.domain = Domain::ball(Vec::zero(n), r);
    s.radius = r;
    s.label = "hemisphere";
    return s;
}

SmoothConvexSpec SmoothConvexSpec::huber(int n, double curvature, double core_radius) {
    require(curvature > 0 && core_radius > 0, "huber: parameters must be positive");
    SmoothConvexSpec s;
    s.kind = SmoothKind::huber;
    s.domain = Domain::all(n, Box::cube(n, -1.5 * core_radius - 1.0, 1.5 * core_radius + 1.0));
    s.curvature = curvature;
    s.radius = core_radius;
    s.declared_support_radius = core_radius;
    s.ma_support_hint = Domain::ball(Vec::zero(n), core_radius);
    s.label = "huber";
    return s;
}

SmoothConvexSpec SmoothConvexSpec::radial_power(int n, double p, Domain dom) {
    require(p >= 2, "radial_power: exponent must be >= 2");
    require(dom.dim() == n, "radial_power: domain dimension mismatch");
    SmoothConvexSpec s;
    s.kind = SmoothKind::radial_power;
    s.domain = std::move(dom);
    s.power = p;
    s.label = "radial_power";
    return s;
}

SmoothConvexSpec SmoothConvexSpec::custom(int n, Domain dom,
                                          std::function<double(const Vec&)> value,
                                          std::function<Vec(const Vec&)> grad,
                                          std::function<Mat(const Vec&)> hess) {
    require(dom.dim() == n, "custom: domain dimension mismatch");
    require(static_cast<bool>(value), "custom: value evaluator required");
    SmoothConvexSpec s;
    s.kind = SmoothKind::custom;
    s.domain = std::move(dom);
    s.value_fn = std::move(value);
    s.grad_fn = std::move(grad);
    s.hess_fn = std::move(hess);
    s.label = "custom";
    return s;
}

static double raw_value(const SmoothConvexSpec& s, const Vec& x) {
    int n = x.dim();
    switch (s.kind) {
        case SmoothKind::quadratic: return 0.5 * dot(x, s.A.mul(x)) + dot(s.b, x) + s.c;
        case SmoothKind::hemisphere: {
            double s2 = s.radius * s.radius - dot(x, x);
            return -std::sqrt(std::max(s2, 0.0));
        }
        case SmoothKind::huber: {
            double rho = norm(x);
            if (rho <= s.radius) return 0.5 * s.curvature * rho * rho;
            return s.curvature * (s.radius * rho - 0.5 * s.radius * s.radius);
        }
        case SmoothKind::radial_power: {
            double rho = norm(x);
            return std::pow(rho, s.power) / s.power;
        }
        default: {
            (void)n;
            return s.value_fn(x);
        }
    }
}

double SmoothConvexSpec::value(const Vec& x) const {
    if (!domain.contains(x)) return kInf;
    return raw_value(*this, x);
}

bool SmoothConvexSpec::has_analytic_hessian() const {
    return kind != SmoothKind::custom || static_cast<bool>(hess_fn);
}

Vec SmoothConvexSpec::gradient(const Vec& x, double h_fd) const {
    int n = x.dim();
    switch (kind) {
        case SmoothKind::quadratic: return A.mul(x) + b;
        case SmoothKind::hemisphere: {
            double s2 = std::max(radius * radius - dot(x, x), 1e-300);
            return (1.0 / std::sqrt(s2)) * x;
        }
        case SmoothKind::huber: {
            double rho = norm(x);
            if (rho <= radius) return curvature * x;
            return (curvature * radius / rho) * x;
        }
        case SmoothKind::radial_power: {
            double rho = norm(x);
            if (rho < 1e-300) return Vec::zero(n);
            return std::pow(rho, power - 2) * x;
        }
        default: {
            if (grad_fn) return grad_fn(x);
            Vec g = Vec::zero(n);
            for (int i = 0; i < n; ++i) {
                Vec xp = x, xm = x;
                xp[i] += h_fd;
                xm[i] -= h_fd;
                g[i] = (value_fn(xp) - value_fn(xm)) / (2 * h_fd);
            }
            return g;
        }
    }
}

Mat SmoothConvexSpec::hessian(const Vec& x, double h_fd) const {
    int n = x.dim();
    switch (kind) {
        case SmoothKind::quadratic: return A;
        case SmoothKind::hemisphere: {
            double s2 = std::max(radius * radius - dot(x, x), 1e-300);
            double s3 = s2 * std::sqrt(s2);
            Mat h = Mat::zero(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    h(i, j) = ((i == j ? s2 : 0.0) + x[i] * x[j]) / s3;
            return h;
        }
        case SmoothKind::huber: {
            double rho = norm(x);
            if (rho <= radius) return Mat::identity(n, curvature);
            Mat h = Mat::zero(n);
            double c1 = curvature * radius / rho;
            double c3 = curvature * radius / (rho * rho * rho);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) h(i, j) = (i == j ? c1 : 0.0) - c3 * x[i] * x[j];
            return h;
        }
        case SmoothKind::radial_power: {
            double rho = norm(x);
            Mat h = Mat::zero(n);
            if (rho < 1e-12 && power > 2) return h;
            double c1 = std::pow(rho, power - 2);
            double c2 = (power - 2) * std::pow(rho, power - 4);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) h(i, j) = (i == j ? c1 : 0.0) + c2 * x[i] * x[j];
            return h;
        }
        default: {
            if (hess_fn) return hess_fn(x);
            Mat h = Mat::zero(n);
            double f0 = value_fn(x);
            for (int i = 0; i < n; ++i) {
                Vec xp = x, xm = x;
                xp[i] += h_fd;
                xm[i] -= h_fd;
                h(i, i) = (value_fn(xp) - 2 * f0 + value_fn(xm)) / (h_fd * h_fd);
                for (int j = i + 1; j < n; ++j) {
                    Vec xpp = x, xpm = x, xmp = x, xmm = x;
                    xpp[i] += h_fd;
                    xpp[j] += h_fd;
                    xpm[i] += h_fd;
                    xpm[j] -= h_fd;
                    xmp[i] -= h_fd;
                    xmp[j] += h_fd;
                    xmm[i] -= h_fd;
                    xmm[j] -= h_fd;
                    h(i, j) = h(j, i) = (value_fn(xpp) - value_fn(xpm) - value_fn(xmp) +
                                         value_fn(xmm)) /
                                        (4 * h_fd * h_fd);
                }
            }
            return h;
        }
    }
}

double SmoothConvexSpec::det_hess(const Vec& x, double h_fd) const {
    return hessian(x, h_fd).det();
}

std::optional<double> SmoothConvexSpec::support_radius() const {
    if (declared_support_radius) return declared_support_radius;
    if (kind == SmoothKind::huber) return radius;
    return std::nullopt;
}

void SmoothConvexSpec::validate(int validation_m) const {
    Box bb = domain.bounding_box();
    GridSpec g = GridSpec::over(bb, validation_m);
    double h = g.min_spacing();
    long long checked = 0;
    for (long long f = 0; f < g.node_count(); ++f) {
        Vec x = g.node(f);
        if (domain.margin(x) < h) continue;
        double v = raw_value(*this, x);
        require(std::isfinite(v), "smooth specimen: value not finite inside domain");
        Mat H = hessian(x);
        double tol = 1e-8 * (1.0 + H.frobenius());
        if (!H.psd(tol)) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "smooth specimen: hessian not PSD at interior point (x0=%g)", x[0]);
            fail(buf);
        }
        ++checked;
    }
    require(checked > 0, "smooth specimen: validation grid has no interior points");
}

// ---------------------------------------------------------------------------
// specimen helpers

int specimen_dim(const Specimen& s) {
    return std::visit([](const auto& v) { return v.dim(); }, s);
}

double specimen_value(const Specimen& s, const Vec& x) {
    return std::visit([&](const auto& v) { return v.value(x); }, s);
}

Domain specimen_domain(const Specimen& s) {
    if (const auto* pl = std::get_if<MaxAffineFunction>(&s)) {
        if (pl->finite_valued)
            return Domain::all(pl->dim(), Box::cube(pl->dim(), -1.0, 1.0));
        return Domain::polytope(pl->domain);
    }
    return std::get<SmoothConvexSpec>(s).domain;
}

bool specimen_finite_valued(const Specimen& s) {
    if (const auto* pl = std::get_if<MaxAffineFunction>(&s)) return pl->finite_valued;
    return std::get<SmoothConvexSpec>(s).domain.is_all_space();
}

const MaxAffineFunction* as_pl(const Specimen& s) { return std::get_if<MaxAffineFunction>(&s); }
const SmoothConvexSpec* as_smooth(const Specimen& s) {
    return std::get_if<SmoothConvexSpec>(&s);
}

// ---------------------------------------------------------------------------
// sampled functions

bool SampledConvexFunction::any_finite() const {
    for (double v : values)
        if (std::isfinite(v)) return true;
    return false;
}

double SampledConvexFunction::finite_max_abs() const {
    double m = 0;
    for (double v : values)
        if (std::isfinite(v)) m = std::max(m, std::fabs(v));
    return m;
}

SampledConvexFunction sample(const Specimen& spec, const GridSpec& grid) {
    SampledConvexFunction f;
    f.grid = grid;
    f.values.resize(grid.node_count());
    for (long long i = 0; i < grid.node_count(); ++i)
        f.values[i] = specimen_value(spec, grid.node(i));
    require(f.any_finite(), "sample: grid box does not intersect the domain");
    return f;
}

double recommended_eps_cvx(const SampledConvexFunction& f, double hessian_bound) {
    double scale = f.finite_max_abs();
    double eps = 1e-9 * (1.0 + scale);
    if (hessian_bound > 0) {
        Vec h = f.grid.spacing();
        double hmax = 0;
        for (int i = 0; i < f.grid.n; ++i) hmax = std::max(hmax, h[i]);
        eps += 0.25 * hmax * hmax * hessian_bound;
    }
    return eps;
}

static std::vector<std::array<int, kMaxDim>> test_directions(int n) {
    std::vector<std::array<int, kMaxDim>> dirs;
    std::array<int, kMaxDim> d{};
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
        int c = code;
        bool zero = true;
        int first_nonzero = 0;
        for (int i = 0; i < n; ++i) {
            d[i] = (c % 3) - 1;
            c /= 3;
            if (d[i] != 0 && zero) {
                zero = false;
                first_nonzero = d[i];
            }
        }
        if (zero || first_nonzero < 0) continue;  // dedupe by sign
        dirs.push_back(d);
    }
    return dirs;
}

ConvexityReport validate_convexity(const SampledConvexFunction& f, double eps_cvx) {
    require(f.any_finite(), "validate_convexity: all values infinite (u == +inf)");
    const GridSpec& g = f.grid;
    auto dirs = test_directions(g.n);
    ConvexityReport rep;
    rep.worst_violation = -kInf;
    for (long long flat = 0; flat < g.node_count(); ++flat) {
        auto idx = g.unflat(flat);
        for (const auto& d : dirs) {
            bool in_range = true;
            std::array<int, kMaxDim> ip = idx, im = idx;
            for (int i = 0; i < g.n; ++i) {
                ip[i] += d[i];
                im[i] -= d[i];
                if (ip[i] < 0 || ip[i] >= g.m || im[i] < 0 || im[i] >= g.m) in_range = false;
            }
            if (!in_range) continue;
            double up = f.values[g.flat(ip)];
            double um = f.values[g.flat(im)];
            double u0 = f.values[flat];
            if (!std::isfinite(up) || !std::isfinite(um)) continue;  // rhs = +inf
            if (!std::isfinite(u0)) {
                rep.worst_violation = kInf;
                rep.note = "infinite midpoint between finite endpoints";
                rep.pass = false;
                return rep;
            }
            double viol = u0 - 0.5 * (up + um);
            rep.worst_violation = std::max(rep.worst_violation, viol);
        }
    }
    if (rep.worst_violation == -kInf) rep.worst_violation = 0;  // no testable triple
    rep.pass = rep.worst_violation <= eps_cvx;
    return rep;
}

// ---------------------------------------------------------------------------
// PL subdivision cells

static void dedupe_pieces(std::vector<Vec>& slopes, std::vector<double>& intercepts) {
    std::vector<size_t> order(slopes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<bool> drop(slopes.size(), false);
    for (size_t i = 0; i < slopes.size(); ++i) {
        if (drop[i]) continue;
        for (size_t j = i + 1; j < slopes.size(); ++j) {
            if (drop[j]) continue;
            double sc = 1.0 + norm(slopes[i]);
            if (norm(slopes[i] - slopes[j]) <= 1e-12 * sc) {
                if (intercepts[j] > intercepts[i]) {
                    slopes[i] = slopes[j];
                    intercepts[i] = intercepts[j];
                }
                drop[j] = true;
            }
        }
    }
    std::vector<Vec> ns;
    std::vector<double> ni;
    for (size_t i = 0; i < slopes.size(); ++i)
        if (!drop[i]) {
            ns.push_back(slopes[i]);
            ni.push_back(intercepts[i]);
        }
    slopes.swap(ns);
    intercepts.swap(ni);
}

static std::vector<PLCell> pl_cells_1d(const MaxAffineFunction& u) {
    auto bb = u.domain.bounding_box();
    double lo = bb.lo[0], hi = bb.hi[0];
    std::vector<Vec> slopes = u.slopes;
    std::vector<double> inter = u.intercepts;
    dedupe_pieces(slopes, inter);

    std::vector<PLCell> cells;
    if (hi <= lo) {  // point domain: single degenerate cell of the argmax piece
        double best = -kInf;
        int bi = 0;
        for (size_t i = 0; i < slopes.size(); ++i) {
            double v = slopes[i][0] * lo + inter[i];
            if (v > best) {
                best = v;
                bi = static_cast<int>(i);
            }
        }
        // map back to original index by slope match
        for (size_t i = 0; i < u.slopes.size(); ++i)
            if (std::fabs(u.slopes[i][0] - slopes[bi][0]) < 1e-12 &&
                std::fabs(u.intercepts[i] - inter[bi]) < 1e-12)
                bi = static_cast<int>(i);
        cells.push_back({bi, {Vec{lo}}, 0.0});
        return cells;
    }

    auto val = [&](size_t i, double x) { return slopes[i][0] * x + inter[i]; };
    // active piece at lo: max value, ties to max slope (dominates to the right)
    size_t cur = 0;
    {
        double best = val(0, lo);
        for (size_t i = 1; i < slopes.size(); ++i) {
            double v = val(i, lo);
            double tol = 1e-12 * (1 + std::fabs(best));
            if (v > best + tol) {
                best = v;
                cur = i;
            } else if (v >= best - tol && slopes[i][0] > slopes[cur][0]) {
                best = std::max(best, v);
                cur = i;
            }
        }
    }
    double x_cur = lo;
    size_t guard = 0;
    while (x_cur < hi && guard++ <= slopes.size() + 2) {
        double x_next = hi;
        size_t nxt = cur;
        for (size_t j = 0; j < slopes.size(); ++j) {
            if (j == cur) continue;
            double da = slopes[j][0] - slopes[cur][0];
            if (da <= 1e-14 * (1 + std::fabs(slopes[cur][0]))) continue;
            double xc = (inter[cur] - inter[j]) / da;
            if (xc <= x_cur + 1e-14 * (1 + std::fabs(x_cur))) {
                // takes over immediately
                if (val(j, x_cur) >= val(cur, x_cur) - 1e-12 * (1 + std::fabs(val(cur, x_cur))) &&
                    slopes[j][0] > slopes[nxt][0] && xc >= x_cur - 1e-9 * (1 + std::fabs(x_cur))) {
                    x_next = x_cur;
                    nxt = j;
                }
                continue;
            }
            if (xc < x_next - 1e-14 * (1 + std::fabs(xc))) {
                x_next = xc;
                nxt = j;
            } else if (std::fabs(xc - x_next) <= 1e-12 * (1 + std::fabs(xc)) &&
                       slopes[j][0] > slopes[nxt][0]) {
                nxt = j;
            }
        }
        double x_end = std::min(x_next, hi);
        if (x_end > x_cur) {
            // original index of this deduped piece
            int orig = -1;
            for (size_t i = 0; i < u.slopes.size(); ++i)
                if (std::fabs(u.slopes[i][0] - slopes[cur][0]) <= 1e-12 * (1 + std::fabs(slopes[cur][0])) &&
                    std::fabs(u.intercepts[i] - inter[cur]) <= 1e-12 * (1 + std::fabs(inter[cur]))) {
                    orig = static_cast<int>(i);
                    break;
                }
            PLCell c;
            c.piece = orig;
            c.vertices = {Vec{x_cur}, Vec{x_end}};
            c.volume = x_end - x_cur;
            cells.push_back(c);
        }
        if (nxt == cur || x_end >= hi) break;
        cur = nxt;
        x_cur = x_end;
    }
    return cells;
}

static std::vector<PLCell> pl_cells_2d(const MaxAffineFunction& u) {
    std::vector<Vec> slopes = u.slopes;
    std::vector<double> inter = u.intercepts;
    dedupe_pieces(slopes, inter);

    std::vector<PLCell> cells;
    for (size_t i = 0; i < slopes.size(); ++i) {
        std::vector<Halfspace> hs = u.domain.halfspaces();
        bool empty = false;
        for (size_t j = 0; j < slopes.size(); ++j) {
            if (j == i) continue;
            Vec row = slopes[j] - slopes[i];
            double rhs = inter[i] - inter[j];
            if (norm(row) <= 1e-12 * (1 + norm(slopes[i]))) {
                if (rhs < 0) {
                    empty = true;  // strictly dominated
                    break;
                }
                continue;
            }
            hs.push_back({row, rhs});
        }
        if (empty) continue;
        // pairwise vertex enumeration with feasibility filter
        std::vector<Vec> vs;
        const double feas = 1e-9;
        for (size_t p = 0; p < hs.size(); ++p)
            for (size_t q = p + 1; q < hs.size(); ++q) {
                auto x = intersect_lines(hs[p].a, hs[p].b, hs[q].a, hs[q].b);
                if (!x) continue;
                bool ok = true;
                for (const auto& h : hs)
                    if (h.slack(*x) < -feas * (1.0 + std::fabs(h.b))) {
                        ok = false;
                        break;
                    }
                if (ok) vs.push_back(*x);
            }
        if (vs.empty()) continue;
        PLCell c;
        // back to an original-piece index
        c.piece = 0;
        for (size_t k = 0; k < u.slopes.size(); ++k)
            if (norm(u.slopes[k] - slopes[i]) <= 1e-12 * (1 + norm(slopes[i])) &&
                std::fabs(u.intercepts[k] - inter[i]) <= 1e-12 * (1 + std::fabs(inter[i]))) {
                c.piece = static_cast<int>(k);
                break;
            }
        auto hull = convex_hull_2d(vs);
        c.vertices = hull.empty() ? vs : hull;
        c.volume = polygon_area(c.vertices.size() >= 3 ? c.vertices : std::vector<Vec>{});
        cells.push_back(c);
    }
    return cells;
}

std::vector<PLCell> pl_cells(const MaxAffineFunction& u) {
    require(u.dim() <= 2, "pl_cells: exact polyhedral subdivision only for n <= 2");
    if (u.dim() == 1) return pl_cells_1d(u);
    return pl_cells_2d(u);
}

std::vector<Vec> pl_subdivision_vertices(const MaxAffineFunction& u) {
    auto cells = pl_cells(u);
    std::vector<Vec> vs;
    for (const auto& c : cells)
        for (const auto& v : c.vertices) {
            bool dup = false;
            for (const auto& w : vs)
                if (dist(v, w) <= 1e-9 * (1.0 + norm(v))) {
                    dup = true;
                    break;
                }
            if (!dup) vs.push_back(v);
        }
    require(!vs.empty(), "pl_subdivision_vertices: degenerate piece subdivision");
    return vs;
}

// ---------------------------------------------------------------------------
// Lipschitz constant

double lipschitz_constant(const MaxAffineFunction& u) {
    int ad = u.domain.affine_dim();
    if (ad == 0) return 0.0;
    int n = u.dim();
    if (n <= 2 && ad == n) {
        auto cells = pl_cells(u);
        Box bb = u.domain.bounding_box();
        double scale = 1.0;
        for (int i = 0; i < n; ++i) scale *= std::max(bb.hi[i] - bb.lo[i], 1.0);
        double tol_vol = 1e-12 * scale;
        double L = 0;
        for (const auto& c : cells)
            if (c.volume > tol_vol) L = std::max(L, norm(u.slopes[c.piece]));
        return L;
    }
    if (n == 2 && ad == 1) {
        // segment domain: restrict to the line and reuse the 1-D path
        const auto& vs = u.domain.vertices();
        Vec a = vs.front(), b = vs.back();
        for (const auto& v : vs) {
            if (dist(v, a) > dist(b, a)) b = v;
        }
        double len = dist(a, b);
        if (len < 1e-14) return 0.0;
        Vec dir = (1.0 / len) * (b - a);
        std::vector<Vec> s1;
        std::vector<double> i1;
        for (size_t i = 0; i < u.slopes.size(); ++i) {
            s1.push_back(Vec{dot(u.slopes[i], dir)});
            i1.push_back(dot(u.slopes[i], a) + u.intercepts[i]);
        }
        auto u1 = MaxAffineFunction::make(s1, i1, DomainPolytope::interval(0, len));
        return lipschitz_constant(u1);
    }
    require(n == 3 && ad == 3,
            "lipschitz_constant: degenerate domains supported in dimension 1-2 only");
    // n = 3: sampled activity (exact subdivision stops at n = 2)
    Box bb = u.domain.bounding_box();
    GridSpec g = GridSpec::over(bb, 9);
    double L = 0;
    for (long long f = 0; f < g.node_count(); ++f) {
        Vec x = g.node(f);
        if (u.domain.margin(x) <= 1e-9) continue;
        double best = -kInf;
        size_t bi = 0;
        for (size_t i = 0; i < u.slopes.size(); ++i) {
            double v = dot(u.slopes[i], x) + u.intercepts[i];
            if (v > best) {
                best = v;
                bi = i;
            }
        }
        L = std::max(L, norm(u.slopes[bi]));
    }
    return L;
}

}  // namespace fasa
