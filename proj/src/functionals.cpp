#include "fasa/functionals.hpp"

#include <algorithm>
#include <cstdio>

namespace fasa {

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> ts(count);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i) ts[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    return ts;
}

}  // namespace

ZetaConcave ZetaConcave::power(double q) {
    require(q > 0 && q < 1, "ZetaConcave::power: exponent must be in (0,1)");
    ZetaConcave z;
    z.kind_ = Kind::power;
    z.param_ = q;
    char buf[48];
    std::snprintf(buf, sizeof buf, "t^%g", q);
    z.name_ = buf;
    z.validate();
    return z;
}

ZetaConcave ZetaConcave::log1p() {
    ZetaConcave z;
    z.kind_ = Kind::log1p;
    z.name_ = "log(1+t)";
    z.validate();
    return z;
}

ZetaConcave ZetaConcave::ratio() {
    ZetaConcave z;
    z.kind_ = Kind::ratio;
    z.name_ = "t/(1+t)";
    z.validate();
    return z;
}

ZetaConcave ZetaConcave::cap(double c) {
    require(c > 0, "ZetaConcave::cap: cap must be positive");
    ZetaConcave z;
    z.kind_ = Kind::cap;
    z.param_ = c;
    char buf[48];
    std::snprintf(buf, sizeof buf, "min(t,%g)", c);
    z.name_ = buf;
    z.validate();
    return z;
}

ZetaConcave ZetaConcave::custom(std::function<double(double)> fn, std::string name) {
    require(static_cast<bool>(fn), "ZetaConcave::custom: evaluator required");
    ZetaConcave z;
    z.kind_ = Kind::custom;
    z.fn_ = std::move(fn);
    z.name_ = std::move(name);
    z.validate();
    return z;
}

double ZetaConcave::operator()(double t) const {
    if (t <= 0) return 0.0;
    switch (kind_) {
        case Kind::power: return std::pow(t, param_);
        case Kind::log1p: return std::log1p(t);
        case Kind::ratio: return t / (1.0 + t);
        case Kind::cap: return std::min(t, param_);
        default: return fn_(t);
    }
}

void ZetaConcave::validate() const {
    const auto& z = *this;
    auto bad = [&](const char* what, double t) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "zeta '%s' rejected: %s (t = %g)", name_.c_str(), what,
                      t);
        fail(buf);
    };
    if (std::fabs(z(0.0)) > 1e-12) bad("zeta(0) != 0", 0.0);
    if (!(z(1e-15) <= 0.9 * z(1e-9) + 1e-15)) bad("not right-continuous at 0", 1e-15);
    auto ts = log_grid(1e-6, 1e9, 61);
    double prev = z(ts[0]);
    double prev_ratio = prev / ts[0];
    if (prev < 0) bad("negative value", ts[0]);
    for (size_t i = 1; i < ts.size(); ++i) {
        double v = z(ts[i]);
        double tol = 1e-9 * (1.0 + std::fabs(v));
        if (v < -tol) bad("negative value", ts[i]);
        if (v < prev - tol) bad("not non-decreasing", ts[i]);
        double r = v / ts[i];
        if (r > prev_ratio + 1e-9 * (1.0 + prev_ratio)) bad("zeta(t)/t not non-increasing", ts[i]);
        prev = v;
        prev_ratio = r;
    }
    // midpoint concavity on arithmetic midpoints of log-grid pairs
    for (size_t i = 0; i + 4 < ts.size(); i += 2) {
        double a = ts[i], b = ts[i + 4];
        double mid = 0.5 * (a + b);
        double lhs = z(mid), rhs = 0.5 * (z(a) + z(b));
        if (lhs < rhs - 1e-9 * (1.0 + std::fabs(rhs))) bad("not midpoint concave", mid);
    }
    // zeta(t)/t decreasing toward 0 at 1e3, 1e6, 1e9
    double r1 = z(1e3) / 1e3, r2 = z(1e6) / 1e6, r3 = z(1e9) / 1e9;
    if (!(r2 < r1 * (1 - 1e-10) + 1e-300 && r3 < r2 * (1 - 1e-10) + 1e-300))
        bad("zeta(t)/t not decreasing toward 0", 1e9);
}

ZetaConcave zeta_dual(const ZetaConcave& z) {
    switch (z.kind()) {
        case ZetaConcave::Kind::power: return ZetaConcave::power(1.0 - z.param());
        case ZetaConcave::Kind::ratio: return ZetaConcave::ratio();  // self-dual
        default: break;
    }
    ZetaConcave copy = z;
    return ZetaConcave::custom(
        [copy](double t) { return t <= 0 ? 0.0 : copy(1.0 / t) * t; },
        "dual(" + z.name() + ")");
}

ZetaConvexDecreasing ZetaConvexDecreasing::exp_neg() {
    ZetaConvexDecreasing z;
    z.kind_ = Kind::exp_neg;
    z.name_ = "exp(-t)";
    z.validate();
    return z;
}

ZetaConvexDecreasing ZetaConvexDecreasing::inv_1pt() {
    ZetaConvexDecreasing z;
    z.kind_ = Kind::inv_1pt;
    z.name_ = "1/(1+t)";
    z.validate();
    return z;
}

ZetaConvexDecreasing ZetaConvexDecreasing::inv_power(double q) {
    require(q > 0, "ZetaConvexDecreasing::inv_power: exponent must be positive");
    ZetaConvexDecreasing z;
    z.kind_ = Kind::inv_power;
    z.param_ = q;
    char buf[48];
    std::snprintf(buf, sizeof buf, "t^-%g", q);
    z.name_ = buf;
    z.validate();
    return z;
}

ZetaConvexDecreasing ZetaConvexDecreasing::custom(std::function<double(double)> fn,
                                                  std::string name) {
    require(static_cast<bool>(fn), "ZetaConvexDecreasing::custom: evaluator required");
    ZetaConvexDecreasing z;
    z.kind_ = Kind::custom;
    z.fn_ = std::move(fn);
    z.name_ = std::move(name);
    z.validate();
    return z;
}

double ZetaConvexDecreasing::operator()(double t) const {
    switch (kind_) {
        case Kind::exp_neg: return std::exp(-std::max(t, 0.0));
        case Kind::inv_1pt: return 1.0 / (1.0 + std::max(t, 0.0));
        case Kind::inv_power: return t <= 0 ? kInf : std::pow(t, -param_);
        default: return fn_(std::max(t, 0.0));
    }
}

bool ZetaConvexDecreasing::infinite_at_zero() const { return !std::isfinite((*this)(0.0)); }

void ZetaConvexDecreasing::validate() const {
    const auto& z = *this;
    auto bad = [&](const char* what, double t) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "zeta '%s' rejected: %s (t = %g)", name_.c_str(), what,
                      t);
        fail(buf);
    };
    auto ts = log_grid(1e-6, 1e9, 61);
    double prev = z(ts[0]);
    for (size_t i = 1; i < ts.size(); ++i) {
        double v = z(ts[i]);
        if (!(v >= 0)) bad("negative value", ts[i]);
        if (std::isfinite(prev) && v > prev + 1e-9 * (1.0 + std::fabs(prev)))
            bad("not decreasing", ts[i]);
        prev = v;
    }
    for (size_t i = 0; i + 4 < ts.size(); i += 2) {
        double a = ts[i], b = ts[i + 4];
        if (!std::isfinite(z(a)) || !std::isfinite(z(b))) continue;
        double mid = 0.5 * (a + b);
        double lhs = z(mid), rhs = 0.5 * (z(a) + z(b));
        if (lhs > rhs + 1e-9 * (1.0 + std::fabs(rhs))) bad("not midpoint convex", mid);
    }
    if (!(z(1e9) <= z(1e3) + 1e-12 * (1.0 + z(1e3)) && z(1e9) <= 0.5 * z(1.0) + 1e-300))
        bad("does not vanish at infinity", 1e9);
}

WeightSpec WeightSpec::one() {
    WeightSpec w;
    w.kind = Kind::one;
    w.name = "1";
    return w;
}

WeightSpec WeightSpec::exp_decay(int n) {
    WeightSpec w;
    w.kind = Kind::exp_decay;
    w.n = n;
    char buf[48];
    std::snprintf(buf, sizeof buf, "exp(-%d*t/%d)", n, n + 2);
    w.name = buf;
    return w;
}

WeightSpec WeightSpec::custom(std::function<double(const Vec&, double)> f, std::string name) {
    require(static_cast<bool>(f), "WeightSpec::custom: evaluator required");
    WeightSpec w;
    w.kind = Kind::custom;
    w.fn = std::move(f);
    w.name = std::move(name);
    return w;
}

double WeightSpec::operator()(const Vec& x, double t) const {
    switch (kind) {
        case Kind::one: return 1.0;
        case Kind::exp_decay: return std::exp(-static_cast<double>(n) / (n + 2) * t);
        default: return fn(x, t);
    }
}

// ---------------------------------------------------------------------------
// functionals

namespace {

FunctionalValue from_quad(const QuadResult& q) {
    FunctionalValue fv;
    fv.value = q.value;
    fv.ac_part = q.value;
    fv.error_estimate = 3.0 * q.error_estimate + 1e-12 * (1.0 + std::fabs(q.value));
    fv.quadrature_converged = q.converged;
    return fv;
}

FunctionalValue exact_zero() {
    FunctionalValue fv;
    fv.value = 0;
    fv.ac_part = 0;
    fv.error_estimate = 0;
    return fv;
}

double fd_step(const Domain& d) {
    Box bb = d.bounding_box();
    double w = norm_inf(bb.extent());
    return std::max(1e-4, w / 4096.0);
}

}  // namespace

FunctionalValue Z_primal(const Specimen& u, const ZetaConcave& zeta, QuadOptions opt) {
    if (as_pl(u)) return exact_zero();  // det Hess = 0 a.e., zeta(0) = 0
    const auto& s = std::get<SmoothConvexSpec>(u);
    require(!s.domain.is_all_space(), "Z_primal: expected a compact-domain specimen");
    if (s.domain.affine_dim() < s.dim() || s.domain.volume() <= 0) return exact_zero();
    double h = fd_step(s.domain);
    auto res = integrate(s.domain, std::nullopt,
                         [&](const Vec& x) { return zeta(s.det_hess(x, h)); }, opt);
    return from_quad(res);
}

namespace {

FunctionalValue z_dual_impl(const Specimen& v, const ZetaConcave& zeta, const WeightSpec* omega,
                            QuadOptions opt) {
    if (as_pl(v)) return exact_zero();
    const auto& s = std::get<SmoothConvexSpec>(v);
    require(specimen_finite_valued(v), "Z_dual: expected a finite-valued specimen");
    double r = ma_support_radius(v);
    require(std::isfinite(r), "Z_dual: support radius not finite");
    if (r <= 0) return exact_zero();
    int n = s.dim();
    Domain region = s.ma_support_hint ? *s.ma_support_hint
                                      : Domain::all(n, Box::cube(n, -r, r));
    double h = std::max(1e-4, r / 4096.0);
    auto integrand = [&](const Vec& x) {
        double z = zeta(std::max(s.det_hess(x, h), 0.0));
        if (omega) z *= (*omega)(x, s.value(x));
        return z;
    };
    auto res = integrate(region, std::nullopt, integrand, opt);
    return from_quad(res);
}

}  // namespace

FunctionalValue Z_dual(const Specimen& v, const ZetaConcave& zeta, QuadOptions opt) {
    return z_dual_impl(v, zeta, nullptr, opt);
}

FunctionalValue Z_weighted(const Specimen& v, const ZetaConcave& zeta, const WeightSpec& omega,
                           QuadOptions opt) {
    return z_dual_impl(v, zeta, &omega, opt);
}

namespace {

// Does {det Hess v = 0} have positive measure inside C?
bool zero_density_set_in(const Specimen& v, const Box& C) {
    if (as_pl(v)) return true;
    const auto& s = std::get<SmoothConvexSpec>(v);
    switch (s.kind) {
        case SmoothKind::quadratic: return s.A.det() <= 1e-12;
        case SmoothKind::hemisphere: return false;
        case SmoothKind::radial_power: return false;  // isolated zero only
        case SmoothKind::huber: {
            for (const auto& c : C.corners())
                if (norm(c) > s.radius + 1e-12) return true;
            return false;
        }
        default: {
            // coarse scan: a run of adjacent near-zero cells marks a flat region
            GridSpec g = GridSpec::over(C, 33);
            long long run = 0;
            for (long long f = 0; f < g.node_count(); ++f) {
                double d = s.det_hess(g.node(f));
                if (std::fabs(d) < 1e-10) {
                    if (++run >= 2) return true;
                } else {
                    run = 0;
                }
            }
            return false;
        }
    }
}

}  // namespace

FunctionalValue Z_lower(const Specimen& v, const ZetaConvexDecreasing& zeta, const Box& C,
                        const WeightSpec& omega, QuadOptions opt) {
    require(C.volume() > 0, "Z_lower: compact set C must have positive volume");
    FunctionalValue fv;
    if (zeta.infinite_at_zero() && zero_density_set_in(v, C)) {
        fv.value = kInf;
        fv.ac_part = kInf;
        fv.infinity_reason = "zeta-infinite-at-0";
        return fv;
    }
    if (const auto* pl = as_pl(v)) {
        // det Hess = 0 a.e.; integrate zeta(0) * omega(x, v(x)) over C
        double z0 = zeta(0.0);
        Domain region = Domain::all(pl->dim(), C);
        auto res = integrate(region, std::nullopt,
                             [&](const Vec& x) { return z0 * omega(x, pl->value(x)); }, opt);
        return from_quad(res);
    }
    const auto& s = std::get<SmoothConvexSpec>(v);
    if (!s.domain.is_all_space())
        for (const auto& c : C.corners())
            require(s.domain.contains(c, 1e-9), "Z_lower: C must lie inside the domain");
    double h = std::max(1e-4, norm_inf(C.extent()) / 4096.0);
    auto integrand = [&](const Vec& x) {
        double z = zeta(std::max(s.det_hess(x, h), 0.0));
        if (!std::isfinite(z)) z = 1e15;  // isolated singularities; divergence is flagged below
        return z * omega(x, s.value(x));
    };
    Domain region = Domain::all(s.dim(), C);
    auto res = integrate(region, std::nullopt, integrand, opt);
    fv = from_quad(res);
    if (!res.converged && zeta.infinite_at_zero() &&
        res.error_estimate > 0.5 * std::fabs(res.value)) {
        fv.value = kInf;
        fv.ac_part = kInf;
        fv.infinity_reason = "divergent-quadrature";
    }
    return fv;
}

namespace {

template <class Zeta>
JensenResult jensen_impl(const Zeta& zeta, const GridFunction& f, const Box& C, bool concave) {
    require(C.volume() > 0, "jensen_check: C must have positive volume");
    std::vector<double> vals, zvals;
    for (long long i = 0; i < f.grid.node_count(); ++i) {
        Vec x = f.grid.node(i);
        if (!C.contains(x, 1e-12)) continue;
        double t = f.values[i];
        require(t >= -1e-12, "jensen_check: f must be non-negative");
        vals.push_back(std::max(t, 0.0));
        zvals.push_back(zeta(std::max(t, 0.0)));
    }
    require(!vals.empty(), "jensen_check: no grid nodes inside C");
    JensenResult r;
    r.lhs = pairwise_sum(zvals) / zvals.size();
    r.rhs = zeta(pairwise_sum(vals) / vals.size());
    double tol = 1e-12 * (1.0 + std::fabs(r.rhs));
    r.ok = concave ? (r.lhs <= r.rhs + tol) : (r.lhs >= r.rhs - tol);
    return r;
}

}  // namespace

JensenResult jensen_check(const ZetaConcave& zeta, const GridFunction& f, const Box& C) {
    return jensen_impl(zeta, f, C, true);
}

JensenResult jensen_check(const ZetaConvexDecreasing& zeta, const GridFunction& f,
                          const Box& C) {
    return jensen_impl(zeta, f, C, false);
}

// ---------------------------------------------------------------------------
// closed-form conjugates

namespace {

bool is_axis_box(const DomainPolytope& p) {
    Box bb = p.bounding_box();
    return std::fabs(p.volume() - bb.volume()) <= 1e-9 * (1.0 + bb.volume());
}

// conjugate of 0.5*k*x^2 + b*x on [lo, hi] (one axis)
struct AxisConj {
    double k, b, lo, hi;
    double value(double y) const {
        double s = y - b;
        double xs = s / k;
        if (xs < lo) return lo * s - 0.5 * k * lo * lo;
        if (xs > hi) return hi * s - 0.5 * k * hi * hi;
        return 0.5 * s * s / k;
    }
    double curv(double y) const {
        double xs = (y - b) / k;
        return (xs > lo && xs < hi) ? 1.0 / k : 0.0;
    }
};

}  // namespace

Specimen conjugate_specimen(const Specimen& u) {
    if (const auto* pl = as_pl(u)) return conjugate_pl(*pl);
    const auto& s = std::get<SmoothConvexSpec>(u);
    require(s.kind == SmoothKind::quadratic,
            "conjugate_specimen: no closed-form conjugate for this specimen");
    int n = s.dim();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            require(std::fabs(s.A(i, j)) <= 1e-12,
                    "conjugate_specimen: quadratic conjugate needs a diagonal A");
    for (int i = 0; i < n; ++i)
        require(s.A(i, i) > 1e-12, "conjugate_specimen: quadratic must be positive definite");

    if (s.domain.shape == Domain::Shape::ball) {
        bool isotropic = true;
        for (int i = 1; i < n; ++i)
            if (std::fabs(s.A(i, i) - s.A(0, 0)) > 1e-12) isotropic = false;
        require(isotropic && norm(s.b) <= 1e-12 && norm(s.domain.center) <= 1e-12,
                "conjugate_specimen: ball-domain quadratic must be isotropic and centered");
        double k = s.A(0, 0);
        double r = s.domain.radius;
        double c0 = s.c;
        auto h = SmoothConvexSpec::huber(n, 1.0 / k, k * r);
        if (std::fabs(c0) < 1e-300) return h;
        auto shifted = SmoothConvexSpec::custom(
            n, h.domain, [h, c0](const Vec& y) { return h.value(y) - c0; },
            [h](const Vec& y) { return h.gradient(y); },
            [h](const Vec& y) { return h.hessian(y); });
        shifted.declared_support_radius = h.declared_support_radius;
        shifted.ma_support_hint = h.ma_support_hint;
        shifted.label = "huber_shifted";
        return shifted;
    }

    require(s.domain.shape == Domain::Shape::polytope && is_axis_box(s.domain.poly),
            "conjugate_specimen: polytope-domain quadratic must be an axis box");
    Box bb = s.domain.poly.bounding_box();
    std::vector<AxisConj> axes(n);
    Vec slo = Vec::zero(n), shi = Vec::zero(n);
    for (int i = 0; i < n; ++i) {
        axes[i] = {s.A(i, i), s.b[i], bb.lo[i], bb.hi[i]};
        slo[i] = s.A(i, i) * bb.lo[i] + s.b[i];
        shi[i] = s.A(i, i) * bb.hi[i] + s.b[i];
    }
    double c0 = s.c;
    Box support{slo, shi};
    auto value = [axes, c0](const Vec& y) {
        double v = -c0;
        for (size_t i = 0; i < axes.size(); ++i) v += axes[i].value(y[i]);
        return v;
    };
    auto hess = [axes](const Vec& y) {
        Mat H = Mat::zero(static_cast<int>(axes.size()));
        for (size_t i = 0; i < axes.size(); ++i) H(i, i) = axes[i].curv(y[i]);
        return H;
    };
    auto conj = SmoothConvexSpec::custom(n, Domain::all(n, support.inflated(1.0)), value,
                                         nullptr, hess);
    double r = 0;
    for (const auto& c : support.corners()) r = std::max(r, norm(c));
    conj.declared_support_radius = r;
    conj.ma_support_hint = Domain::polytope(DomainPolytope::box(support));
    conj.label = "quadratic_conjugate";
    return conj;
}

DualityGap duality_gap(const Specimen& u, const ZetaConcave& zeta, QuadOptions opt) {
    auto primal = Z_primal(u, zeta, opt);
    auto conj = conjugate_specimen(u);
    auto dual = Z_dual(conj, zeta_dual(zeta), opt);
    DualityGap g;
    g.primal = primal.value;
    g.dual = dual.value;
    g.gap = std::fabs(primal.value - dual.value);
    g.combined_error = primal.error_estimate + dual.error_estimate;
    return g;
}

}  // namespace fasa
