#include "fasa/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace fasa {

json num_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

double num_from_json(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        fail("num_from_json: unknown numeric string '" + s + "'");
    }
    return j.get<double>();
}

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
    return a;
}

Vec vec_from_json(const json& j) {
    std::vector<double> xs;
    for (const auto& x : j) xs.push_back(x.get<double>());
    return Vec::from(xs);
}

json box_to_json(const Box& b) { return json{{"lo", vec_to_json(b.lo)}, {"hi", vec_to_json(b.hi)}}; }

Box box_from_json(const json& j) { return Box{vec_from_json(j.at("lo")), vec_from_json(j.at("hi"))}; }

json grid_to_json(const GridSpec& g) {
    return json{{"n", g.n}, {"lo", vec_to_json(g.lo)}, {"hi", vec_to_json(g.hi)}, {"m", g.m}};
}

GridSpec grid_from_json(const json& j) {
    return GridSpec::make(j.at("n").get<int>(), vec_from_json(j.at("lo")),
                          vec_from_json(j.at("hi")), j.at("m").get<int>());
}

json polytope_to_json(const DomainPolytope& p) {
    json hs = json::array();
    for (const auto& h : p.halfspaces()) hs.push_back({{"a", vec_to_json(h.a)}, {"b", h.b}});
    json vs = json::array();
    for (const auto& v : p.vertices()) vs.push_back(vec_to_json(v));
    return json{{"n", p.dim()}, {"halfspaces", hs}, {"vertices", vs}};
}

DomainPolytope polytope_from_json(const json& j) {
    int n = j.at("n").get<int>();
    std::vector<Vec> pts;
    for (const auto& v : j.at("vertices")) pts.push_back(vec_from_json(v));
    if (n <= 2) return DomainPolytope::from_points(n, pts);
    // n = 3: axis boxes only
    Vec lo = pts.at(0), hi = pts.at(0);
    for (const auto& p : pts)
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    return DomainPolytope::box(Box{lo, hi});
}

json domain_to_json(const Domain& d) {
    switch (d.shape) {
        case Domain::Shape::polytope:
            return json{{"shape", "polytope"}, {"polytope", polytope_to_json(d.poly)}};
        case Domain::Shape::ball:
            return json{{"shape", "ball"}, {"center", vec_to_json(d.center)},
                        {"radius", d.radius}};
        default:
            return json{{"shape", "all_space"}, {"bbox_hint", box_to_json(d.bbox_hint)}};
    }
}

Domain domain_from_json(const json& j) {
    std::string shape = j.at("shape").get<std::string>();
    if (shape == "polytope") return Domain::polytope(polytope_from_json(j.at("polytope")));
    if (shape == "ball")
        return Domain::ball(vec_from_json(j.at("center")), j.at("radius").get<double>());
    if (shape == "all_space") {
        Box b = box_from_json(j.at("bbox_hint"));
        return Domain::all(b.dim(), b);
    }
    fail("domain_from_json: unknown shape '" + shape + "'");
}

json specimen_to_json(const Specimen& s) {
    if (const auto* pl = as_pl(s)) {
        json slopes = json::array();
        for (const auto& a : pl->slopes) slopes.push_back(vec_to_json(a));
        return json{{"kind", "max_affine"},
                    {"slopes", slopes},
                    {"intercepts", pl->intercepts},
                    {"finite_valued", pl->finite_valued},
                    {"domain", polytope_to_json(pl->domain)}};
    }
    const auto& sp = std::get<SmoothConvexSpec>(s);
    switch (sp.kind) {
        case SmoothKind::quadratic: {
            json A = json::array();
            for (int i = 0; i < sp.A.n; ++i) {
                json row = json::array();
                for (int k = 0; k < sp.A.n; ++k) row.push_back(sp.A(i, k));
                A.push_back(row);
            }
            return json{{"kind", "quadratic"},
                        {"A", A},
                        {"b", vec_to_json(sp.b)},
                        {"c", sp.c},
                        {"domain", domain_to_json(sp.domain)}};
        }
        case SmoothKind::hemisphere:
            return json{{"kind", "hemisphere"}, {"n", sp.dim()}, {"radius", sp.radius}};
        case SmoothKind::huber:
            return json{{"kind", "huber"},
                        {"n", sp.dim()},
                        {"curvature", sp.curvature},
                        {"core_radius", sp.radius}};
        case SmoothKind::radial_power:
            return json{{"kind", "radial_power"},
                        {"n", sp.dim()},
                        {"power", sp.power},
                        {"domain", domain_to_json(sp.domain)}};
        default: fail("specimen_to_json: custom evaluators are not serializable");
    }
}

Specimen specimen_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "max_affine") {
        std::vector<Vec> slopes;
        for (const auto& a : j.at("slopes")) slopes.push_back(vec_from_json(a));
        std::vector<double> inter = j.at("intercepts").get<std::vector<double>>();
        auto u = MaxAffineFunction::make(std::move(slopes), std::move(inter),
                                         polytope_from_json(j.at("domain")));
        u.finite_valued = j.value("finite_valued", false);
        return u;
    }
    if (kind == "quadratic") {
        const auto& Aj = j.at("A");
        int n = static_cast<int>(Aj.size());
        Mat A = Mat::zero(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) A(i, k) = Aj.at(i).at(k).get<double>();
        return SmoothConvexSpec::quadratic(A, vec_from_json(j.at("b")), j.at("c").get<double>(),
                                           domain_from_json(j.at("domain")));
    }
    if (kind == "hemisphere")
        return SmoothConvexSpec::hemisphere(j.at("n").get<int>(), j.at("radius").get<double>());
    if (kind == "huber")
        return SmoothConvexSpec::huber(j.at("n").get<int>(), j.at("curvature").get<double>(),
                                       j.at("core_radius").get<double>());
    if (kind == "radial_power")
        return SmoothConvexSpec::radial_power(j.at("n").get<int>(), j.at("power").get<double>(),
                                              domain_from_json(j.at("domain")));
    fail("specimen_from_json: unknown kind '" + kind + "'");
}

json sampled_to_json(const SampledConvexFunction& f) {
    json vals = json::array();
    for (double v : f.values) vals.push_back(num_to_json(v));
    return json{{"grid", grid_to_json(f.grid)}, {"values", vals}};
}

SampledConvexFunction sampled_from_json(const json& j) {
    SampledConvexFunction f;
    f.grid = grid_from_json(j.at("grid"));
    for (const auto& v : j.at("values")) f.values.push_back(num_from_json(v));
    require(static_cast<long long>(f.values.size()) == f.grid.node_count(),
            "sampled_from_json: value count does not match the grid");
    return f;
}

json measure_to_json(const MongeAmpereMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms) atoms.push_back({{"x", vec_to_json(a.x)}, {"mass", a.mass}});
    json density = nullptr;
    if (mu.density_grid)
        density = json{{"grid", grid_to_json(*mu.density_grid)}, {"cell_values", mu.density}};
    return json{{"atoms", atoms}, {"density", density}, {"support_radius", mu.support_radius}};
}

MongeAmpereMeasure measure_from_json(const json& j) {
    MongeAmpereMeasure mu;
    for (const auto& a : j.at("atoms"))
        mu.atoms.push_back({vec_from_json(a.at("x")), a.at("mass").get<double>()});
    if (!j.at("density").is_null()) {
        mu.density_grid = grid_from_json(j.at("density").at("grid"));
        mu.density = j.at("density").at("cell_values").get<std::vector<double>>();
    }
    mu.support_radius = j.at("support_radius").get<double>();
    return mu;
}

json functional_value_to_json(const FunctionalValue& fv) {
    return json{{"value", num_to_json(fv.value)},
                {"error_estimate", fv.error_estimate},
                {"ac_part", num_to_json(fv.ac_part)},
                {"infinity_reason", fv.infinity_reason},
                {"quadrature_converged", fv.quadrature_converged}};
}

json zeta_to_json(const ZetaConcave& z) {
    switch (z.kind()) {
        case ZetaConcave::Kind::power: return json{{"kind", "power"}, {"q", z.param()}};
        case ZetaConcave::Kind::log1p: return json{{"kind", "log1p"}};
        case ZetaConcave::Kind::ratio: return json{{"kind", "ratio"}};
        case ZetaConcave::Kind::cap: return json{{"kind", "cap"}, {"c", z.param()}};
        default: fail("zeta_to_json: custom zeta is not serializable");
    }
}

ZetaConcave zeta_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return ZetaConcave::power(j.at("q").get<double>());
    if (kind == "log1p") return ZetaConcave::log1p();
    if (kind == "ratio") return ZetaConcave::ratio();
    if (kind == "cap") return ZetaConcave::cap(j.at("c").get<double>());
    fail("zeta_from_json: unknown kind '" + kind + "'");
}

json zeta_cvx_to_json(const ZetaConvexDecreasing& z) {
    switch (z.kind()) {
        case ZetaConvexDecreasing::Kind::exp_neg: return json{{"kind", "exp_neg"}};
        case ZetaConvexDecreasing::Kind::inv_1pt: return json{{"kind", "inv_1pt"}};
        case ZetaConvexDecreasing::Kind::inv_power:
            return json{{"kind", "inv_power"}, {"q", z.param()}};
        default: fail("zeta_cvx_to_json: custom zeta is not serializable");
    }
}

ZetaConvexDecreasing zeta_cvx_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "exp_neg") return ZetaConvexDecreasing::exp_neg();
    if (kind == "inv_1pt") return ZetaConvexDecreasing::inv_1pt();
    if (kind == "inv_power") return ZetaConvexDecreasing::inv_power(j.at("q").get<double>());
    fail("zeta_cvx_from_json: unknown kind '" + kind + "'");
}

json weight_to_json(const WeightSpec& w) {
    switch (w.kind) {
        case WeightSpec::Kind::one: return json{{"kind", "one"}};
        case WeightSpec::Kind::exp_decay: return json{{"kind", "exp_decay"}, {"n", w.n}};
        default: fail("weight_to_json: custom weight is not serializable");
    }
}

WeightSpec weight_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "one") return WeightSpec::one();
    if (kind == "exp_decay") return WeightSpec::exp_decay(j.at("n").get<int>());
    fail("weight_from_json: unknown kind '" + kind + "'");
}

json convergence_report_to_json(const ConvergenceReport& r) {
    json probes = json::array();
    for (const auto& p : r.probes) {
        json errs = json::array();
        for (double e : p.errors) errs.push_back(num_to_json(e));
        probes.push_back({{"probe", box_to_json(p.probe)},
                          {"exterior", p.exterior},
                          {"errors", errs}});
    }
    json lips = json::array(), radii = json::array();
    for (double l : r.lipschitz) lips.push_back(num_to_json(l));
    for (double s : r.support_radius) radii.push_back(num_to_json(s));
    return json{{"ks", r.ks},
                {"probes", probes},
                {"lipschitz", lips},
                {"support_radius", radii},
                {"epi_certified", r.epi_certified},
                {"tau_certified", r.tau_certified},
                {"tau_star_certified", r.tau_star_certified},
                {"lipschitz_bound", num_to_json(r.lipschitz_bound)},
                {"support_bound", num_to_json(r.support_bound)},
                {"detail", r.detail}};
}

json verdict_to_json(const VerdictRecord& v) {
    json zs = json::array();
    for (double z : v.z_values) zs.push_back(num_to_json(z));
    json lips = json::array(), radii = json::array();
    for (double l : v.lipschitz) lips.push_back(num_to_json(l));
    for (double s : v.support_radius) radii.push_back(num_to_json(s));
    return json{{"family", v.family},
                {"functional", v.functional},
                {"pass", v.pass},
                {"ks", v.ks},
                {"Z_k", zs},
                {"lipschitz_k", lips},
                {"support_radius_k", radii},
                {"Z_limit", num_to_json(v.z_limit)},
                {"proxy", num_to_json(v.proxy)},
                {"gap", num_to_json(v.gap)},
                {"burn_in_k", v.burn_in_k},
                {"notes", v.notes}};
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::string header) : text_(std::move(header)) { text_ += "\n"; }

void CsvWriter::row(const std::vector<double>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ",";
        text_ += format_double(cells[i]);
    }
    text_ += "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ",";
        text_ += cells[i];
    }
    text_ += "\n";
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "CsvWriter: cannot open '" + path + "' for writing");
    out << text_;
    require(out.good(), "CsvWriter: write failed for '" + path + "'");
}

}  // namespace fasa
