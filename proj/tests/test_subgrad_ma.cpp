#include <doctest.h>

#include "fasa/catalog.hpp"
#include "fasa/subgrad_ma.hpp"
#include "oracles.hpp"

using namespace fasa;

TEST_CASE("subdifferentials of PL functions") {
    auto a = abs_pl(1);
    auto s0 = subdifferential_pl(a, Vec{0});
    CHECK(s0.hull_points.size() == 2);
    double lo = std::min(s0.hull_points[0][0], s0.hull_points[1][0]);
    double hi = std::max(s0.hull_points[0][0], s0.hull_points[1][0]);
    CHECK(lo == doctest::Approx(-1.0));
    CHECK(hi == doctest::Approx(1.0));
    CHECK(s0.recession.empty());

    auto s1 = subdifferential_pl(a, Vec{1});
    CHECK(s1.hull_points.size() == 1);
    CHECK(s1.hull_points[0][0] == doctest::Approx(1.0));
    REQUIRE(s1.recession.size() == 1);
    CHECK(s1.recession[0][0] == doctest::Approx(1.0));

    CHECK(subdifferential_pl(a, Vec{2}).empty());

    // cross slopes at the origin: hull of (+-1, 0), (0, +-1), area 2 by shoelace
    auto cross = MaxAffineFunction::make_finite(
        {Vec{1, 0}, Vec{-1, 0}, Vec{0, 1}, Vec{0, -1}}, {0, 0, 0, 0}, 2);
    auto sc = subdifferential_pl(cross, Vec{0, 0});
    CHECK(sc.hull_points.size() == 4);
    CHECK(hull_area_2d(sc.hull_points) == doctest::Approx(2.0));
}

TEST_CASE("Monge-Ampere atoms of PL functions") {
    auto vabs = MaxAffineFunction::make_finite({Vec{1}, Vec{-1}}, {0, 0}, 1);
    auto mu = ma_atoms_pl(vabs);
    REQUIRE(mu.atoms.size() == 1);
    CHECK(mu.atoms[0].x[0] == doctest::Approx(0.0));
    CHECK(mu.atoms[0].mass == doctest::Approx(2.0));
    CHECK(mu.support_radius == doctest::Approx(0.0));

    auto cross = MaxAffineFunction::make_finite(
        {Vec{1, 0}, Vec{-1, 0}, Vec{0, 1}, Vec{0, -1}}, {0, 0, 0, 0}, 2);
    auto muc = ma_atoms_pl(cross);
    REQUIRE(muc.atoms.size() == 1);
    CHECK(muc.atoms[0].mass == doctest::Approx(2.0));

    // conjugate of the box indicator: |y1| + |y2|, one atom of mass 4
    auto box2 = MaxAffineFunction::indicator(DomainPolytope::box(Box::cube(2, -1, 1)));
    auto star = conjugate_pl(box2);
    auto mus = ma_atoms_pl(star);
    REQUIRE(mus.atoms.size() == 1);
    CHECK(norm(mus.atoms[0].x) == doctest::Approx(0.0));
    CHECK(mus.atoms[0].mass == doctest::Approx(4.0));

    auto compact = abs_pl(1);
    CHECK_THROWS_AS(ma_atoms_pl(compact), Error);
}

TEST_CASE("smooth Monge-Ampere densities") {
    // k<x,x> has Hessian 2k: constant density
    double k = 3.0;
    auto q = SmoothConvexSpec::quadratic(Mat::identity(1, 2 * k), Vec::zero(1), 0,
                                         Domain::ball(Vec::zero(1), 1.0));
    auto mu = ma_density_smooth(q, GridSpec::make(1, Vec{-1}, Vec{1}, 33));
    for (double d : mu.density) CHECK(d == doctest::Approx(2 * k));

    // hemisphere density at the center cell is ~ (1 - x^2)^{-3/2} = 1
    auto hemi = SmoothConvexSpec::hemisphere(1, 1.0);
    auto muh = ma_density_smooth(hemi, GridSpec::make(1, Vec{-1}, Vec{1}, 65));
    double center = muh.density[muh.density.size() / 2];
    CHECK(center == doctest::Approx(1.0).epsilon(0.01));

    // huber outside the core has rank-deficient Hessian: density 0
    auto hub = SmoothConvexSpec::huber(2, 1.0, 1.0);
    double far = hub.det_hess(Vec{1.5, 0.0});
    CHECK(far == doctest::Approx(0.0));
    CHECK(hub.det_hess(Vec{0.2, 0.1}) == doctest::Approx(1.0));

    // non-convex input rejected
    auto bad = SmoothConvexSpec::custom(
        1, Domain::polytope(DomainPolytope::interval(-1, 1)),
        [](const Vec& x) { return -x[0] * x[0]; });
    CHECK_THROWS_WITH_AS(ma_density_smooth(bad, GridSpec::make(1, Vec{-1}, Vec{1}, 9)),
                         doctest::Contains("convexity violation"), Error);
}

TEST_CASE("ma_box on atoms, densities, and separable conjugates") {
    auto vabs = MaxAffineFunction::make_finite({Vec{1}, Vec{-1}}, {0, 0}, 1);
    CHECK(ma_box(vabs, Box::of(-0.5, 0.5)) == doctest::Approx(2.0));
    CHECK(ma_box(vabs, Box::of(0.25, 0.5)) == doctest::Approx(0.0));

    auto q = SmoothConvexSpec::quadratic(Mat::identity(1), Vec::zero(1), 0,
                                         Domain::all(1, Box::of(-2, 2)));
    CHECK(ma_box(q, Box::of(0, 1)) == doctest::Approx(1.0).epsilon(1e-6));

    auto box2 = MaxAffineFunction::indicator(DomainPolytope::box(Box::cube(2, -1, 1)));
    auto star = conjugate_pl(box2);
    CHECK(ma_box(star, Box::cube(2, -1, 1)) == doctest::Approx(4.0));
}

TEST_CASE("total mass identity") {
    auto ind = MaxAffineFunction::indicator(DomainPolytope::interval(-1, 1));
    auto mc = total_mass_check(ind);
    CHECK(mc.lhs == doctest::Approx(2.0));
    CHECK(mc.gap <= 1e-9 * (1 + mc.rhs));

    auto box2 = MaxAffineFunction::indicator(DomainPolytope::box(Box::cube(2, -1, 1)));
    auto mc2 = total_mass_check(box2);
    CHECK(mc2.rhs == doctest::Approx(4.0));
    CHECK(mc2.gap <= 1e-9 * (1 + mc2.rhs));

    auto mabs = total_mass_check(abs_pl(1));
    CHECK(mabs.lhs == doctest::Approx(2.0));
    double brute = oracles::brute_gradient_range(
        [](double x) { return std::fabs(x); }, -1, 1);
    CHECK(mabs.lhs == doctest::Approx(brute).epsilon(1e-3));

    RandomStream rng(2024);
    for (int i = 0; i < 200; ++i) {
        auto stream = rng.split(i);
        auto u = random_max_affine(stream, 1 + (i % 2));
        auto m = total_mass_check(u);
        INFO("instance " << i);
        CHECK(m.gap <= 1e-9 * (1 + m.rhs));
    }
}

TEST_CASE("subdifferential duality via Fenchel-Young equality") {
    // tangents of x^2/2 with a tangency point at 0.3
    auto tang = MaxAffineFunction::make(
        {Vec{-0.9}, Vec{-0.3}, Vec{0.3}, Vec{0.9}},
        {-0.405, -0.045, -0.045, -0.405}, DomainPolytope::interval(-1, 1));
    CHECK(subdiff_duality_check(tang, {{Vec{0.3}, Vec{0.3}}}) <= 1e-12);

    CHECK(subdiff_duality_check(abs_pl(1), {{Vec{0}, Vec{0.5}}}) <= 1e-12);

    RandomStream rng(99);
    for (int inst = 0; inst < 100; ++inst) {
        auto stream = rng.split(inst);
        int n = 1 + (inst % 2);
        auto u = random_max_affine(stream, n);
        std::vector<std::pair<Vec, Vec>> pairs;
        for (const auto& c : pl_cells(u)) {
            if (c.volume <= 1e-10) continue;
            Vec x = Vec::zero(n);
            for (const auto& v : c.vertices) x = x + v;
            x = (1.0 / c.vertices.size()) * x;
            pairs.push_back({x, u.slopes[c.piece]});
        }
        // subdivision vertices with hull combinations
        for (const auto& v : pl_subdivision_vertices(u)) {
            auto act = u.active_pieces(v);
            Vec p = Vec::zero(n);
            double wsum = 0;
            for (size_t i = 0; i < act.size(); ++i) {
                double w = 1.0 + stream.next();
                p = p + w * u.slopes[act[i]];
                wsum += w;
            }
            pairs.push_back({v, (1.0 / wsum) * p});
        }
        INFO("instance " << inst);
        CHECK(subdiff_duality_check(u, pairs) <= 1e-9);
    }
}

TEST_CASE("affine shifts and translations of PL measures") {
    RandomStream rng(4);
    for (int inst = 0; inst < 10; ++inst) {
        auto stream = rng.split(inst);
        int n = 1 + (inst % 2);
        auto u = random_max_affine(stream, n);
        auto v = conjugate_pl(u);  // finite-valued PL
        auto mu = ma_atoms_pl(v);

        // adding an affine piece-wise shift: slopes + c, intercept + d
        MaxAffineFunction w = v;
        Vec c = Vec::zero(n);
        for (int i = 0; i < n; ++i) c[i] = stream.uniform(-1, 1);
        for (auto& s : w.slopes) s = s + c;
        for (auto& b : w.intercepts) b += 0.7;
        auto muw = ma_atoms_pl(w);
        REQUIRE(muw.atoms.size() == mu.atoms.size());
        Box bb = Box::cube(n, -10, 10);
        CHECK(ma_box(w, bb) == doctest::Approx(ma_box(v, bb)).epsilon(1e-12));
        for (size_t i = 0; i < mu.atoms.size(); ++i) {
            CHECK(dist(muw.atoms[i].x, mu.atoms[i].x) <= 1e-9);
            CHECK(muw.atoms[i].mass == doctest::Approx(mu.atoms[i].mass).epsilon(1e-12));
        }

        // translation v(. - a): atoms shift by a, masses unchanged
        MaxAffineFunction t = v;
        Vec a = Vec::zero(n);
        for (int i = 0; i < n; ++i) a[i] = stream.uniform(-0.5, 0.5);
        for (size_t i = 0; i < t.slopes.size(); ++i) t.intercepts[i] -= dot(t.slopes[i], a);
        auto mut = ma_atoms_pl(t);
        REQUIRE(mut.atoms.size() == mu.atoms.size());
        double total0 = mu.total_atom_mass(), total1 = mut.total_atom_mass();
        CHECK(total1 == doctest::Approx(total0).epsilon(1e-12));
    }
}

TEST_CASE("measure family contract: additivity and positivity") {
    MongeAmpereFamily fam;
    auto box2 = MaxAffineFunction::indicator(DomainPolytope::box(Box::cube(2, -1, 1)));
    Specimen star = conjugate_pl(box2);
    Box whole = Box::cube(2, -2, 2);
    double total = fam.measure_of(star, whole);
    CHECK(total >= 0);
    // split into 4 disjoint quadrant boxes (atom at origin counted once if we
    // keep the boxes half-open by a tiny shift)
    double q1 = fam.measure_of(star, Box{Vec{1e-9, 1e-9}, Vec{2, 2}});
    double q2 = fam.measure_of(star, Box{Vec{-2, 1e-9}, Vec{-1e-9, 2}});
    double q3 = fam.measure_of(star, Box{Vec{-2, -2}, Vec{-1e-9, -1e-9}});
    double q4 = fam.measure_of(star, Box{Vec{1e-9, -2}, Vec{2, -1e-9}});
    double atom = fam.measure_of(star, Box::cube(2, -1e-9, 1e-9));
    CHECK(q1 + q2 + q3 + q4 + atom == doctest::Approx(total).epsilon(1e-9));

    auto hub = SmoothConvexSpec::huber(1, 1.0, 1.0);
    Specimen hs = hub;
    double left = fam.measure_of(hs, Box::of(-1, 0));
    double right = fam.measure_of(hs, Box::of(0, 1));
    double both = fam.measure_of(hs, Box::of(-1, 1));
    CHECK(left + right == doctest::Approx(both).epsilon(1e-6));
    CHECK(fam.density_at(hs, Vec{0.5}) == doctest::Approx(1.0));
    CHECK(fam.density_at(star, Vec{0.0, 0.0}) == 0.0);
}

TEST_CASE("monotone nested boxes for smooth radial specimens") {
    auto hemi = SmoothConvexSpec::hemisphere(1, 1.0);
    Specimen h = hemi;
    double prev = 0;
    for (double r : {0.2, 0.4, 0.6, 0.8}) {
        double m = ma_box(h, Box::of(-r, r));
        CHECK(m >= prev - 1e-9);
        prev = m;
    }
}

TEST_CASE("Monte-Carlo box mass for n = 3") {
    // l1-norm slopes: gradient range is the cross-polytope, volume 4/3
    std::vector<Vec> slopes;
    std::vector<double> inter;
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 3; ++i) {
            Vec a = Vec::zero(3);
            a[i] = s ? 1.0 : -1.0;
            slopes.push_back(a);
            inter.push_back(0.0);
        }
    auto v = MaxAffineFunction::make_finite(std::move(slopes), std::move(inter), 3);
    CHECK_THROWS_WITH_AS(ma_box(v, Box::cube(3, -1, 1)),
                         doctest::Contains("ma_box_montecarlo"), Error);
    auto mc = ma_box_montecarlo(v, Box::cube(3, -1, 1), 4000, RandomStream(17));
    CHECK(mc.value == doctest::Approx(4.0 / 3.0).epsilon(0.05));
    CHECK(mc.ci95_half >= 0);
    // same seed, same estimate
    auto mc2 = ma_box_montecarlo(v, Box::cube(3, -1, 1), 4000, RandomStream(17));
    CHECK(mc.value == mc2.value);
}

TEST_CASE("weak-star gap of the smoothing family against the closed form") {
    auto family = sqrt_smoothing_family(geometric_schedule(256));
    TestFunction beta{[](const Vec& x) { return std::max(0.0, 1.0 - std::fabs(x[0])); },
                      Box::of(-1, 1)};
    double prev = kInf;
    for (int k : family.schedule) {
        double gap = weak_star_gap(family, beta, k);
        double eps = 1.0 / std::sqrt(static_cast<double>(k));
        double closed = 2.0 * std::sqrt(1.0 + eps * eps) - 2.0 * eps - 2.0;
        CHECK(gap == doctest::Approx(closed).epsilon(0.02));
        CHECK(std::fabs(gap) <= prev + 1e-9);
        prev = std::fabs(gap);
    }
    // constant family: gap identically zero
    auto ind = MaxAffineFunction::make_finite({Vec{1}, Vec{-1}}, {0, 0}, 1);
    auto constant = SequenceFamily::make(
        "const", [ind](int) -> Specimen { return ind; }, ind, {1, 2, 4});
    CHECK(weak_star_gap(constant, beta, 4) == doctest::Approx(0.0));
}
