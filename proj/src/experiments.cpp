#include "fasa/experiments.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fasa {

namespace {

ZetaConcave zeta_from_config(const json& j) { return zeta_from_json(j); }

ZetaConvexDecreasing zeta_cvx_from_config(const json& j) { return zeta_cvx_from_json(j); }

CsvWriter trajectory_csv(const VerdictRecord& v) {
    CsvWriter csv("k,Z_k,lipschitz_k,support_radius_k");
    for (size_t i = 0; i < v.ks.size(); ++i)
        csv.row({static_cast<double>(v.ks[i]), v.z_values[i], v.lipschitz[i],
                 v.support_radius[i]});
    return csv;
}

// --- example1: upper semicontinuity fails under epi-convergence alone -------

ScenarioOutcome run_example1(const ScenarioConfig& cfg) {
    int n = cfg.n;
    auto schedule = cfg.schedule.empty() ? geometric_schedule(256) : cfg.schedule;
    auto family = example_blowup_family(n, schedule);
    auto zeta = zeta_from_config(cfg.zeta);
    auto verdict = semicontinuity_verdict(family, FunctionalDescriptor::upper(zeta),
                                          cfg.parallel);
    auto tau = tau_check(family);

    // closed form for the default zeta = t^(1/3), n = 1: Z(u_k) = 2 (2k)^(1/3)
    bool traj_matches = true;
    json closed = json::array();
    if (n == 1) {
        double ball_vol = 2.0;
        for (size_t i = 0; i < verdict.ks.size(); ++i) {
            double expect = ball_vol * zeta(2.0 * verdict.ks[i]);
            closed.push_back(expect);
            if (std::fabs(verdict.z_values[i] - expect) > 0.01 * expect) traj_matches = false;
        }
    }
    bool lips_witness = true;
    for (size_t i = 0; i < verdict.ks.size(); ++i)
        if (std::fabs(verdict.lipschitz[i] - 2.0 * verdict.ks[i]) >
            1e-6 * (1.0 + 2.0 * verdict.ks[i]))
            lips_witness = false;

    ScenarioOutcome out;
    out.name = "example1";
    out.as_expected = !verdict.pass && tau.epi_certified && !tau.tau_certified &&
                      traj_matches && lips_witness && verdict.z_limit == 0.0;
    out.details = {{"verdict", verdict_to_json(verdict)},
                   {"tau_report", convergence_report_to_json(tau)},
                   {"closed_form_trajectory", closed},
                   {"trajectory_matches_closed_form", traj_matches},
                   {"lipschitz_witness_2k", lips_witness}};
    out.artifacts.push_back({"trajectory.csv", trajectory_csv(verdict).text()});
    return out;
}

// --- hemisphere-asa ----------------------------------------------------------

ScenarioOutcome run_hemisphere(const ScenarioConfig& cfg) {
    int n = cfg.n;
    auto spec = SmoothConvexSpec::hemisphere(n, 1.0);
    auto zeta = ZetaConcave::power(1.0 / (n + 2));
    auto fv = Z_primal(spec, zeta);
    double expect = (n == 1) ? M_PI : 2.0 * M_PI;
    double tol = (n == 1) ? 0.01 : 0.02;
    ScenarioOutcome out;
    out.name = "hemisphere-asa";
    out.as_expected = std::fabs(fv.value - expect) <= tol * expect;
    out.details = {{"n", n},
                   {"zeta", zeta.name()},
                   {"value", functional_value_to_json(fv)},
                   {"expected", expect},
                   {"rel_tolerance", tol}};
    CsvWriter csv("n,value,expected,rel_error");
    csv.row({static_cast<double>(n), fv.value, expect,
             std::fabs(fv.value - expect) / expect});
    out.artifacts.push_back({"identities.csv", csv.text()});
    return out;
}

// --- duality-identity --------------------------------------------------------

ScenarioOutcome run_duality(const ScenarioConfig& cfg) {
    std::vector<int> ks = cfg.schedule.empty() ? std::vector<int>{1, 2, 8} : cfg.schedule;
    std::vector<ZetaConcave> zetas{ZetaConcave::power(1.0 / 3.0), ZetaConcave::log1p()};
    CsvWriter csv("k,zeta,primal,dual,gap,combined_error");
    bool ok = true;
    json rows = json::array();
    for (int k : ks) {
        auto u = SmoothConvexSpec::quadratic(
            Mat::identity(1, static_cast<double>(k)), Vec::zero(1), 0,
            Domain::polytope(DomainPolytope::interval(-1, 1)));
        for (const auto& z : zetas) {
            auto g = duality_gap(u, z);
            double scale = std::max(std::fabs(g.primal), std::fabs(g.dual));
            bool pass = g.gap <= 0.01 * scale;
            ok = ok && pass;
            csv.raw_row({std::to_string(k), z.name(), format_double(g.primal),
                         format_double(g.dual), format_double(g.gap),
                         format_double(g.combined_error)});
            rows.push_back({{"k", k},
                            {"zeta", z.name()},
                            {"primal", g.primal},
                            {"dual", g.dual},
                            {"gap", g.gap},
                            {"combined_error", g.combined_error},
                            {"pass", pass}});
        }
    }
    ScenarioOutcome out;
    out.name = "duality-identity";
    out.as_expected = ok;
    out.details = {{"cases", rows}};
    out.artifacts.push_back({"identities.csv", csv.text()});
    return out;
}

// --- pl-approx-usc -----------------------------------------------------------

ScenarioOutcome run_pl_approx(const ScenarioConfig& cfg) {
    auto schedule = cfg.schedule.empty() ? geometric_schedule(1024) : cfg.schedule;
    auto zeta = zeta_from_config(cfg.zeta);
    bool ok = true;
    json fams = json::array();
    ScenarioOutcome out;
    out.name = "pl-approx-usc";
    int idx = 0;
    for (double curv : {0.5, 1.0, 2.0}) {
        auto family = tangent_family(1, schedule, curv, 1.0);
        auto verdict = semicontinuity_verdict(family, FunctionalDescriptor::upper(zeta),
                                              cfg.parallel);
        auto tau = tau_check(family);
        bool strict_gap = verdict.gap > 0.1;  // PL trajectories vanish, the limit does not
        ok = ok && verdict.pass && tau.tau_certified && strict_gap;
        fams.push_back({{"curvature", curv},
                        {"verdict", verdict_to_json(verdict)},
                        {"tau_certified", tau.tau_certified},
                        {"strict_gap", strict_gap}});
        out.artifacts.push_back(
            {"trajectory_" + std::to_string(idx++) + ".csv", trajectory_csv(verdict).text()});
    }
    out.as_expected = ok;
    out.details = {{"families", fams}};
    return out;
}

// --- weighted-asa -------------------------------------------------------------

ScenarioOutcome run_weighted(const ScenarioConfig& cfg) {
    int n = cfg.n;
    auto schedule = cfg.schedule.empty() ? geometric_schedule(1024) : cfg.schedule;
    auto zeta = ZetaConcave::power(1.0 / (n + 2));
    WeightSpec omega =
        cfg.omega_kind == "one" ? WeightSpec::one() : WeightSpec::exp_decay(n);
    auto family = huber_curvature_family(n, schedule, 1.0);
    auto verdict = semicontinuity_verdict(
        family, FunctionalDescriptor::upper_weighted(zeta, omega), cfg.parallel);
    auto ts = tau_star_check(family);
    ScenarioOutcome out;
    out.name = "weighted-asa";
    out.as_expected = verdict.pass && ts.tau_star_certified;
    out.details = {{"omega", omega.name},
                   {"verdict", verdict_to_json(verdict)},
                   {"tau_star", convergence_report_to_json(ts)}};
    out.artifacts.push_back({"trajectory.csv", trajectory_csv(verdict).text()});
    return out;
}

// --- lower-sc ------------------------------------------------------------------

ScenarioOutcome run_lower_sc(const ScenarioConfig& cfg) {
    auto schedule = cfg.schedule.empty() ? geometric_schedule(64) : cfg.schedule;
    Box C = cfg.C;
    auto family = tangent_family(1, schedule, 1.0, 1.0);

    auto zc = zeta_cvx_from_config(cfg.zeta_cvx);
    auto v1 = semicontinuity_verdict(family, FunctionalDescriptor::lower(zc, C), cfg.parallel);
    double limit_expect = std::exp(-1.0) * C.volume();
    bool limit_ok = zc.kind() != ZetaConvexDecreasing::Kind::exp_neg ||
                    std::fabs(v1.z_limit - limit_expect) <= 0.01 * limit_expect;

    auto zinf = ZetaConvexDecreasing::inv_power(0.5);
    auto v2 = semicontinuity_verdict(family, FunctionalDescriptor::lower(zinf, C),
                                     cfg.parallel);
    bool inf_ok = v2.pass;
    for (double z : v2.z_values) inf_ok = inf_ok && std::isinf(z);

    ScenarioOutcome out;
    out.name = "lower-sc";
    out.as_expected = v1.pass && limit_ok && inf_ok;
    out.details = {{"verdict", verdict_to_json(v1)},
                   {"limit_expected", limit_expect},
                   {"verdict_infinite_zeta", verdict_to_json(v2)}};
    out.artifacts.push_back({"trajectory.csv", trajectory_csv(v1).text()});
    out.artifacts.push_back({"trajectory_inf.csv", trajectory_csv(v2).text()});
    return out;
}

// --- mass-identity --------------------------------------------------------------

ScenarioOutcome run_mass_identity(const ScenarioConfig& cfg) {
    RandomStream rng(cfg.seed);
    CsvWriter csv("instance,n,lhs,rhs,gap");
    double worst_rel = 0;
    bool ok = true;
    for (int i = 0; i < cfg.instances; ++i) {
        int n = (i % 2) + 1;
        auto stream = rng.split(i);
        auto u = random_max_affine(stream, n);
        auto mc = total_mass_check(u);
        double tol = 1e-9 * (1.0 + mc.rhs);
        ok = ok && (mc.gap <= tol);
        worst_rel = std::max(worst_rel, mc.gap / (1.0 + mc.rhs));
        csv.row({static_cast<double>(i), static_cast<double>(n), mc.lhs, mc.rhs, mc.gap});
    }
    ScenarioOutcome out;
    out.name = "mass-identity";
    out.as_expected = ok;
    out.details = {{"instances", cfg.instances},
                   {"worst_relative_gap", worst_rel},
                   {"tolerance", "1e-9 * (1 + volume)"}};
    out.artifacts.push_back({"identities.csv", csv.text()});
    return out;
}

// --- weakstar --------------------------------------------------------------------

ScenarioOutcome run_weakstar(const ScenarioConfig& cfg) {
    auto schedule = cfg.schedule.empty() ? geometric_schedule(1024) : cfg.schedule;
    auto family = sqrt_smoothing_family(schedule);
    TestFunction beta{[](const Vec& x) { return std::max(0.0, 1.0 - std::fabs(x[0])); },
                      Box::of(-1, 1)};
    Box C = Box::of(-0.5, 0.5);
    CsvWriter csv("k,gap,compact_diag");
    json rows = json::array();
    double prev = kInf;
    bool decreasing = true;
    double last_gap = kInf;
    for (int k : schedule) {
        double g = weak_star_gap(family, beta, k);
        double d = weak_star_compact_diag(family, C, k);
        csv.row({static_cast<double>(k), g, d});
        rows.push_back({{"k", k}, {"gap", g}, {"compact_diag", d}});
        if (std::fabs(g) > prev + 1e-9) decreasing = false;
        prev = std::fabs(g);
        last_gap = std::fabs(g);
    }
    ScenarioOutcome out;
    out.name = "weakstar";
    out.as_expected = decreasing && last_gap <= 0.1;
    out.details = {{"rows", rows}, {"gap_trajectory_decreasing", decreasing},
                   {"final_abs_gap", last_gap}};
    out.artifacts.push_back({"trajectory.csv", csv.text()});
    return out;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
    static const std::vector<ScenarioInfo> reg = {
        {"example1",
         "quadratic blow-up family: upper semicontinuity fails under epi-convergence alone; "
         "the unbounded-Lipschitz witness L_k = 2k",
         "upper verdict FAIL, epi certified, tau not certified", {1, 2}},
        {"hemisphere-asa",
         "functional affine surface area of the hemisphere, zeta = t^(1/(n+2))",
         "value pi (n=1) / 2*pi (n=2) within 1% / 2%", {1, 2}},
        {"duality-identity",
         "conjugate identity: Z_zeta(u) equals Z_dual(u*, dual zeta) for quadratics on an "
         "interval",
         "relative gap <= 1% for every (k, zeta) case", {1}},
        {"pl-approx-usc",
         "tangent PL families of a parabola: upper semicontinuity with a strict gap "
         "(the functional vanishes on piecewise linear functions)",
         "upper verdict PASS with positive gap, tau certified", {1}},
        {"weighted-asa",
         "weighted functional with omega = exp(-n t/(n+2)) on a huber curvature family",
         "upper verdict PASS, tau* certified", {1, 2}},
        {"lower-sc",
         "lower semicontinuity on a compact box for decreasing convex integrands, including "
         "the zeta(0) = +inf case",
         "lower verdicts PASS; +inf trajectory handled", {1}},
        {"mass-identity",
         "total Monge-Ampere mass of the conjugate equals the domain volume",
         "gap <= 1e-9 * (1 + volume) on every random instance", {1, 2}},
        {"weakstar",
         "weak* convergence of Monge-Ampere measures along a smoothing family",
         "test-function gap decreasing with final |gap| <= 0.1", {1}},
    };
    return reg;
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    ScenarioConfig c;
    c.scenario = j.at("scenario").get<std::string>();
    c.n = j.value("n", 1);
    c.grid_m = j.value("grid_m", 0);
    if (j.contains("schedule")) c.schedule = j.at("schedule").get<std::vector<int>>();
    if (j.contains("zeta")) c.zeta = j.at("zeta");
    if (j.contains("zeta_cvx")) c.zeta_cvx = j.at("zeta_cvx");
    c.omega_kind = j.value("omega", std::string());
    if (j.contains("C")) c.C = box_from_json(j.at("C"));
    c.out_dir = j.value("out_dir", std::string());
    c.seed = j.value("seed", static_cast<uint64_t>(12345));
    c.parallel = j.value("parallel", false);
    c.instances = j.value("instances", 200);
    c.validate();
    return c;
}

json ScenarioConfig::to_json() const {
    return json{{"scenario", scenario},
                {"n", n},
                {"grid_m", grid_m},
                {"schedule", schedule},
                {"zeta", zeta},
                {"zeta_cvx", zeta_cvx},
                {"omega", omega_kind},
                {"C", box_to_json(C)},
                {"out_dir", out_dir},
                {"seed", seed},
                {"parallel", parallel},
                {"instances", instances}};
}

void ScenarioConfig::validate() const {
    const auto& reg = scenario_registry();
    auto it = std::find_if(reg.begin(), reg.end(),
                           [&](const ScenarioInfo& s) { return s.name == scenario; });
    require(it != reg.end(), "unknown scenario '" + scenario + "'");
    require(std::find(it->dims.begin(), it->dims.end(), n) != it->dims.end(),
            "scenario '" + scenario + "' does not support n = " + std::to_string(n));
    for (size_t i = 1; i < schedule.size(); ++i)
        require(schedule[i] > schedule[i - 1], "schedule must be strictly increasing");
    require(instances > 0, "instances must be positive");
}

std::string resolve_out_dir(const ScenarioConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return "out";
}

json ExperimentReport::to_json() const {
    json outs = json::array();
    for (const auto& o : outcomes)
        outs.push_back(
            {{"name", o.name}, {"as_expected", o.as_expected}, {"details", o.details}});
    return json{{"version", version},
                {"config", config.to_json()},
                {"outcomes", outs},
                {"all_as_expected", all_as_expected}};
}

ExperimentReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioOutcome out;
    if (cfg.scenario == "example1")
        out = run_example1(cfg);
    else if (cfg.scenario == "hemisphere-asa")
        out = run_hemisphere(cfg);
    else if (cfg.scenario == "duality-identity")
        out = run_duality(cfg);
    else if (cfg.scenario == "pl-approx-usc")
        out = run_pl_approx(cfg);
    else if (cfg.scenario == "weighted-asa")
        out = run_weighted(cfg);
    else if (cfg.scenario == "lower-sc")
        out = run_lower_sc(cfg);
    else if (cfg.scenario == "mass-identity")
        out = run_mass_identity(cfg);
    else if (cfg.scenario == "weakstar")
        out = run_weakstar(cfg);
    else
        fail("unknown scenario '" + cfg.scenario + "'");

    ExperimentReport rep;
    rep.config = cfg;
    rep.outcomes.push_back(out);
    rep.all_as_expected = out.as_expected;

    namespace fs = std::filesystem;
    fs::path dir = fs::path(resolve_out_dir(cfg)) / cfg.scenario;
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, "cannot create output directory '" + dir.string() + "'");
    {
        std::ofstream f(dir / "report.json", std::ios::binary);
        require(f.good(), "cannot write report.json under '" + dir.string() + "'");
        f << rep.to_json().dump(2) << "\n";
    }
    for (const auto& [name, text] : out.artifacts) {
        std::ofstream f(dir / name, std::ios::binary);
        require(f.good(), "cannot write artifact '" + name + "'");
        f << text;
    }
    return rep;
}

}  // namespace fasa
