#include "fasa/convergence.hpp"

#include <algorithm>
#include <future>

namespace fasa {

SequenceFamily SequenceFamily::make(std::string name, std::function<Specimen(int)> gen,
                                    Specimen limit, std::vector<int> schedule, Mode claimed) {
    require(static_cast<bool>(gen), "SequenceFamily: generator required");
    require(!schedule.empty(), "SequenceFamily: schedule must be non-empty");
    for (size_t i = 1; i < schedule.size(); ++i)
        require(schedule[i] > schedule[i - 1], "SequenceFamily: schedule must be increasing");
    SequenceFamily f;
    f.name = std::move(name);
    f.generator = std::move(gen);
    f.limit = std::move(limit);
    f.schedule = std::move(schedule);
    f.claimed = claimed;
    return f;
}

std::vector<int> geometric_schedule(int k_max) {
    std::vector<int> ks;
    for (int k = 1; k <= k_max; k *= 2) ks.push_back(k);
    return ks;
}

double specimen_lipschitz(const Specimen& s) {
    if (const auto* pl = as_pl(s)) return lipschitz_constant(*pl);
    const auto& sp = std::get<SmoothConvexSpec>(s);
    Box bb = sp.domain.bounding_box();
    GridSpec g = GridSpec::over(bb, 33);
    double L = 0;
    for (long long f = 0; f < g.node_count(); ++f) {
        Vec x = g.node(f);
        if (!sp.domain.contains(x, 1e-12)) continue;
        L = std::max(L, norm(sp.gradient(x)));
    }
    return L;
}

std::vector<Box> default_probes(const Specimen& limit) {
    Domain dom = specimen_domain(limit);
    int n = dom.dim();
    std::vector<Box> probes;
    if (dom.is_all_space()) {
        double r = ma_support_radius(limit);
        if (!std::isfinite(r)) r = 1.0;
        probes.push_back(Box::cube(n, -r - 1.0, r + 1.0));
        return probes;
    }
    Box bb = dom.bounding_box();
    double diam = std::max(norm_inf(bb.extent()), 1.0);
    if (dom.affine_dim() == n && dom.volume() > 0) {
        Box inner;
        if (dom.shape == Domain::Shape::ball) {
            double half = 0.95 * dom.radius / std::sqrt(static_cast<double>(n));
            inner = Box{dom.center, dom.center};
            for (int i = 0; i < n; ++i) {
                inner.lo[i] -= half;
                inner.hi[i] += half;
            }
            probes.push_back(inner);
        } else {
            Vec c = dom.poly.centroid();
            double shrink = 0.95;
            bool found = false;
            for (int it = 0; it < 60 && !found; ++it) {
                inner.lo = c + shrink * (bb.lo - c);
                inner.hi = c + shrink * (bb.hi - c);
                found = true;
                for (const auto& corner : inner.corners())
                    if (dom.margin(corner) < 0.02 * diam) {
                        found = false;
                        break;
                    }
                shrink *= 0.9;
            }
            if (found && inner.volume() > 0) probes.push_back(inner);
        }
    }
    // one exterior probe (dom(limit) != R^n here)
    Box ext;
    ext.lo = bb.hi;
    ext.hi = bb.hi;
    for (int i = 0; i < n; ++i) {
        ext.lo[i] += 0.25 * diam;
        ext.hi[i] += 0.75 * diam;
    }
    probes.push_back(ext);
    return probes;
}

namespace {

enum class ProbeKind { interior, exterior };

ProbeKind classify_probe(const Domain& dom, const Box& probe) {
    double diam = std::max(norm_inf(dom.bounding_box().extent()), 1e-6);
    double m_tol = 1e-6 * (1.0 + diam);
    bool all_inside = true;
    for (const auto& c : probe.corners())
        if (dom.margin(c) < m_tol) {
            all_inside = false;
            break;
        }
    if (all_inside) return ProbeKind::interior;
    if (!dom.is_all_space()) {
        bool separated = false;
        if (dom.shape == Domain::Shape::ball) {
            double d2 = 0;
            for (int i = 0; i < probe.dim(); ++i) {
                double c = std::clamp(dom.center[i], probe.lo[i], probe.hi[i]);
                d2 += (c - dom.center[i]) * (c - dom.center[i]);
            }
            separated = std::sqrt(d2) > dom.radius + m_tol;
        } else {
            // separating-axis test: domain facet normals plus coordinate axes
            for (const auto& h : dom.poly.halfspaces()) {
                bool all_violate = true;
                for (const auto& c : probe.corners())
                    if (h.slack(c) > -m_tol) {
                        all_violate = false;
                        break;
                    }
                if (all_violate) {
                    separated = true;
                    break;
                }
            }
            Box db = dom.bounding_box();
            for (int i = 0; i < probe.dim() && !separated; ++i)
                if (probe.lo[i] > db.hi[i] + m_tol || probe.hi[i] < db.lo[i] - m_tol)
                    separated = true;
        }
        if (separated) return ProbeKind::exterior;
    }
    fail("probe touches the domain boundary of the limit");
}

constexpr double kExteriorDivergence = 10.0;  // inf u_k must clear this to certify

}  // namespace

ConvergenceReport epi_convergence_estimate(const SequenceFamily& family,
                                           const std::vector<Box>& probes) {
    require(!probes.empty(), "epi_convergence_estimate: need at least one probe");
    Domain dom = specimen_domain(family.limit);
    int n = dom.dim();
    int probe_m = (n == 1) ? 65 : 17;

    ConvergenceReport rep;
    rep.ks = family.schedule;
    std::vector<Specimen> specs;
    for (int k : family.schedule) specs.push_back(family.generator(k));
    for (const auto& s : specs) {
        rep.lipschitz.push_back(specimen_lipschitz(s));
        rep.support_radius.push_back(ma_support_radius(s));
    }

    bool all_certified = true;
    for (const auto& probe : probes) {
        ProbeKind kind = classify_probe(dom, probe);
        ProbeTrace trace;
        trace.probe = probe;
        trace.exterior = (kind == ProbeKind::exterior);
        GridSpec pg = GridSpec::over(probe, probe_m);
        double value_scale = 0;
        if (!trace.exterior)
            for (long long f = 0; f < pg.node_count(); ++f) {
                double v = specimen_value(family.limit, pg.node(f));
                if (std::isfinite(v)) value_scale = std::max(value_scale, std::fabs(v));
            }
        for (const auto& s : specs) {
            if (trace.exterior) {
                double inf_v = kInf;
                for (long long f = 0; f < pg.node_count(); ++f)
                    inf_v = std::min(inf_v, specimen_value(s, pg.node(f)));
                trace.inf_values.push_back(inf_v);
                trace.errors.push_back(1.0 / (1.0 + std::max(inf_v, 0.0)));
            } else {
                double err = 0;
                for (long long f = 0; f < pg.node_count(); ++f) {
                    Vec x = pg.node(f);
                    double vk = specimen_value(s, x);
                    double vl = specimen_value(family.limit, x);
                    if (!std::isfinite(vk)) {
                        err = kInf;
                        break;
                    }
                    err = std::max(err, std::fabs(vk - vl));
                }
                trace.errors.push_back(err);
            }
        }
        // certification per probe
        bool mono = true;
        for (size_t i = 1; i < trace.errors.size(); ++i)
            if (trace.errors[i] > trace.errors[i - 1] * (1 + 1e-9) + 1e-12 * (1 + value_scale))
                mono = false;
        bool certified;
        if (trace.exterior) {
            double last_inf = trace.inf_values.back();
            certified = mono && (last_inf >= kExteriorDivergence);
        } else {
            double tol_epi = 1e-3 * (1.0 + value_scale);
            certified = mono && trace.errors.back() <= tol_epi;
        }
        all_certified = all_certified && certified;
        rep.probes.push_back(std::move(trace));
    }
    rep.epi_certified = all_certified;
    return rep;
}

namespace {

// Divergence witness over a geometric schedule: the final value left the
// final-quarter value behind by more than 1.5x.
bool diverging(const std::vector<double>& vals) {
    if (vals.size() < 3) return false;
    for (double v : vals)
        if (!std::isfinite(v)) return true;
    size_t mid = vals.size() - 3;
    return vals.back() > 1.5 * vals[mid] + 1e-9;
}

}  // namespace

ConvergenceReport tau_check(const SequenceFamily& family) {
    auto rep = epi_convergence_estimate(family, default_probes(family.limit));
    bool bounded = !diverging(rep.lipschitz);
    rep.tau_certified = rep.epi_certified && bounded;
    if (rep.tau_certified) {
        rep.lipschitz_bound = 0;
        for (double l : rep.lipschitz) rep.lipschitz_bound = std::max(rep.lipschitz_bound, l);
    } else if (!bounded) {
        rep.detail = "lipschitz constants diverge along the schedule";
    }
    return rep;
}

ConvergenceReport tau_star_check(const SequenceFamily& family) {
    auto rep = epi_convergence_estimate(family, default_probes(family.limit));
    bool bounded = !diverging(rep.support_radius);
    rep.tau_star_certified = rep.epi_certified && bounded;
    if (rep.tau_star_certified) {
        rep.support_bound = 0;
        for (double r : rep.support_radius) rep.support_bound = std::max(rep.support_bound, r);
    } else if (!bounded) {
        rep.detail = "Monge-Ampere support radii diverge along the schedule";
    }
    return rep;
}

TransportReport duality_transport(const SequenceFamily& family) {
    const auto* pl_limit = as_pl(family.limit);
    require(pl_limit && pl_limit->dim() <= 2,
            "duality_transport: PL specimens in dimension <= 2 required");
    auto gen = family.generator;
    auto conj_gen = [gen](int k) -> Specimen {
        Specimen s = gen(k);
        const auto* pl = as_pl(s);
        require(pl, "duality_transport: family must generate PL specimens");
        return conjugate_pl(*pl);
    };
    TransportReport tr;
    tr.conjugate_family =
        SequenceFamily::make(family.name + "*", conj_gen, conjugate_pl(*pl_limit),
                             family.schedule, SequenceFamily::Mode::tau_star);
    tr.primal = tau_check(family);
    tr.dual = tau_star_check(tr.conjugate_family);
    tr.agree = (tr.primal.tau_certified == tr.dual.tau_star_certified);
    tr.bound_gap = 0;
    for (size_t i = 0; i < tr.primal.lipschitz.size(); ++i)
        tr.bound_gap = std::max(
            tr.bound_gap, std::fabs(tr.primal.lipschitz[i] - tr.dual.support_radius[i]));
    return tr;
}

FunctionalDescriptor FunctionalDescriptor::upper(ZetaConcave z) {
    FunctionalDescriptor fd;
    fd.mode = Mode::upper;
    fd.zeta_concave = std::move(z);
    return fd;
}

FunctionalDescriptor FunctionalDescriptor::upper_weighted(ZetaConcave z, WeightSpec w) {
    FunctionalDescriptor fd = upper(std::move(z));
    fd.omega = std::move(w);
    return fd;
}

FunctionalDescriptor FunctionalDescriptor::lower(ZetaConvexDecreasing z, Box C) {
    FunctionalDescriptor fd;
    fd.mode = Mode::lower;
    fd.zeta_cvx = std::move(z);
    fd.C = C;
    return fd;
}

namespace {

double eval_functional(const Specimen& s, const FunctionalDescriptor& fd) {
    if (fd.mode == FunctionalDescriptor::Mode::upper) {
        require(fd.zeta_concave.has_value(),
                "semicontinuity_verdict: upper mode needs a concave zeta");
        if (fd.omega) return Z_weighted(s, *fd.zeta_concave, *fd.omega, fd.quad).value;
        if (specimen_finite_valued(s)) return Z_dual(s, *fd.zeta_concave, fd.quad).value;
        return Z_primal(s, *fd.zeta_concave, fd.quad).value;
    }
    require(fd.zeta_cvx.has_value(),
            "semicontinuity_verdict: lower mode needs a decreasing convex zeta");
    require(fd.C.has_value(), "semicontinuity_verdict: lower mode needs a compact C");
    WeightSpec w = fd.omega ? *fd.omega : WeightSpec::one();
    return Z_lower(s, *fd.zeta_cvx, *fd.C, w, fd.quad).value;
}

}  // namespace

VerdictRecord semicontinuity_verdict(const SequenceFamily& family,
                                     const FunctionalDescriptor& fd, bool parallel) {
    VerdictRecord v;
    v.family = family.name;
    if (fd.mode == FunctionalDescriptor::Mode::upper)
        v.functional = "upper:" + fd.zeta_concave->name() +
                       (fd.omega ? ",omega=" + fd.omega->name : "");
    else
        v.functional = "lower:" + fd.zeta_cvx->name();
    v.ks = family.schedule;

    std::vector<Specimen> specs;
    for (int k : family.schedule) specs.push_back(family.generator(k));
    v.z_values.resize(specs.size());
    if (parallel) {
        std::vector<std::future<double>> futs;
        futs.reserve(specs.size());
        for (const auto& s : specs)
            futs.push_back(
                std::async(std::launch::async, [&s, &fd] { return eval_functional(s, fd); }));
        for (size_t i = 0; i < futs.size(); ++i) v.z_values[i] = futs[i].get();
    } else {
        for (size_t i = 0; i < specs.size(); ++i) v.z_values[i] = eval_functional(specs[i], fd);
    }
    for (const auto& s : specs) {
        v.lipschitz.push_back(specimen_lipschitz(s));
        v.support_radius.push_back(ma_support_radius(s));
    }
    v.z_limit = eval_functional(family.limit, fd);

    size_t window = std::min<size_t>(3, v.z_values.size());
    if (fd.mode == FunctionalDescriptor::Mode::upper) {
        double proxy = -kInf;
        for (size_t i = v.z_values.size() - window; i < v.z_values.size(); ++i)
            proxy = std::max(proxy, v.z_values[i]);
        v.proxy = proxy;
        if (!std::isfinite(v.z_limit))
            v.pass = true;  // Z(u) = +inf dominates any trajectory
        else
            v.pass = proxy <= v.z_limit * (1 + kTolSc) + kTolAbs;
        v.gap = v.z_limit - proxy;
        double bound = v.z_limit * (1 + kTolSc) + kTolAbs;
        for (size_t i = v.z_values.size(); i-- > 0;) {
            if (std::isfinite(v.z_limit) && v.z_values[i] > bound) break;
            v.burn_in_k = v.ks[i];
        }
        v.notes = "limsup proxy = max of final window; finite-k evidence only";
    } else {
        double proxy = kInf;
        for (size_t i = v.z_values.size() - window; i < v.z_values.size(); ++i)
            proxy = std::min(proxy, v.z_values[i]);
        v.proxy = proxy;
        if (!std::isfinite(proxy))
            v.pass = true;  // +inf trajectory dominates every limit
        else if (!std::isfinite(v.z_limit))
            v.pass = false;
        else
            v.pass = proxy >= v.z_limit * (1 - kTolSc) - kTolAbs;
        v.gap = v.proxy - v.z_limit;
        v.notes = "liminf proxy = min of final window; finite-k evidence only";
    }
    return v;
}

double weak_star_gap(const SequenceFamily& family, const TestFunction& beta, int k) {
    return ma_integral(family.generator(k), beta) - ma_integral(family.limit, beta);
}

double weak_star_compact_diag(const SequenceFamily& family, const Box& C, int k) {
    return ma_box(family.generator(k), C) - ma_box(family.limit, C);
}

}  // namespace fasa
