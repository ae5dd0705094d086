#include <doctest.h>

#include "fasa/catalog.hpp"
#include "fasa/legendre.hpp"
#include "oracles.hpp"

using namespace fasa;

TEST_CASE("exact PL conjugates against brute force") {
    // indicator of [-1,1] -> |y|
    auto ind = MaxAffineFunction::indicator(DomainPolytope::interval(-1, 1));
    auto star = conjugate_pl(ind);
    CHECK(star.finite_valued);
    for (double y : {-2.0, -0.3, 0.0, 0.7, 2.0})
        CHECK(star.raw_max(Vec{y}) == doctest::Approx(std::fabs(y)).epsilon(1e-12));

    // |x| on [-1,1] -> max(-y-1, 0, y-1)
    auto a = abs_pl(1);
    auto astar = conjugate_pl(a);
    for (double y : {-3.0, -1.0, -0.4, 0.0, 0.5, 1.0, 2.5}) {
        double expect = oracles::brute_conjugate_1d(
            [](double x) { return std::fabs(x) <= 1 ? std::fabs(x) : kInf; }, -1, 1, y);
        CHECK(astar.raw_max(Vec{y}) == doctest::Approx(expect).epsilon(1e-6));
        CHECK(astar.raw_max(Vec{y}) ==
              doctest::Approx(std::max({-y - 1.0, 0.0, y - 1.0})).epsilon(1e-12));
    }

    // u(x) = 2x on [0,1] -> max(0, y-2)
    auto lin = MaxAffineFunction::make({Vec{2}}, {0}, DomainPolytope::interval(0, 1));
    auto lstar = conjugate_pl(lin);
    for (double y : {-1.0, 0.0, 1.9, 2.0, 3.5}) {
        CHECK(lstar.raw_max(Vec{y}) == doctest::Approx(std::max(0.0, y - 2.0)).epsilon(1e-12));
        double expect =
            oracles::brute_conjugate_1d([](double x) { return 2 * x; }, 0, 1, y);
        CHECK(lstar.raw_max(Vec{y}) == doctest::Approx(expect).epsilon(1e-5));
    }
}

TEST_CASE("2-D PL conjugate matches dense brute force") {
    RandomStream rng(3);
    for (int inst = 0; inst < 5; ++inst) {
        auto stream = rng.split(inst);
        auto u = random_max_affine(stream, 2);
        auto star = conjugate_pl(u);
        Box bb = u.domain.bounding_box();
        double L = lipschitz_constant(u);
        int samples = 601;
        double h = std::max(bb.hi[0] - bb.lo[0], bb.hi[1] - bb.lo[1]) / (samples - 1);
        for (int t = 0; t < 8; ++t) {
            Vec y{stream.uniform(-2, 2), stream.uniform(-2, 2)};
            double expect = oracles::brute_conjugate_2d(
                [&](const Vec& x) { return u.value(x); }, bb, y, samples);
            // the grid sup underestimates by at most the integrand Lipschitz
            // constant times the grid diagonal
            CHECK(star.raw_max(y) >= expect - 1e-9);
            CHECK(star.raw_max(y) <= expect + (norm(y) + L) * h * 1.5 + 1e-9);
        }
    }
}

TEST_CASE("discrete conjugate of smooth samples") {
    // x^2/2 on [-2,2]: self-conjugate at y = 1
    auto q = SmoothConvexSpec::quadratic(Mat::identity(1), Vec::zero(1), 0,
                                         Domain::polytope(DomainPolytope::interval(-2, 2)));
    auto s = sample(q, GridSpec::make(1, Vec{-2}, Vec{2}, 401));
    DualGridSpec dual;
    dual.grid = GridSpec::make(1, Vec{-2.2}, Vec{2.2}, 441);  // node exactly at y = 1
    auto star = conjugate_sampled(s, dual);
    long long j = 320;  // -2.2 + 320*0.01 = 1.0
    CHECK(star.grid.node(j)[0] == doctest::Approx(1.0));
    CHECK(star.values[j] == doctest::Approx(0.5).epsilon(1e-3));

    // indicator samples -> |y| exactly at dual nodes
    auto ind = sample(MaxAffineFunction::indicator(DomainPolytope::interval(-1, 1)),
                      GridSpec::make(1, Vec{-1}, Vec{1}, 41));
    auto istar = conjugate_sampled(ind, DualGridSpec::auto_sized(ind));
    for (long long k = 0; k < istar.grid.node_count(); ++k)
        CHECK(istar.values[k] ==
              doctest::Approx(std::fabs(istar.grid.node(k)[0])).epsilon(1e-12));

    // x^4/4 on [-2,2]: conjugate (3/4)|y|^{4/3} at y = 1
    auto rp = SmoothConvexSpec::radial_power(
        1, 4.0, Domain::polytope(DomainPolytope::interval(-2, 2)));
    auto s4 = sample(rp, GridSpec::make(1, Vec{-2}, Vec{2}, 401));
    DualGridSpec d4;
    d4.grid = GridSpec::make(1, Vec{-8.8}, Vec{8.8}, 1761);
    auto star4 = conjugate_sampled(s4, d4);
    long long j4 = 980;  // -8.8 + 980*0.01 = 1.0
    CHECK(star4.grid.node(j4)[0] == doctest::Approx(1.0));
    CHECK(star4.values[j4] == doctest::Approx(0.75).epsilon(5e-3 / 0.75));
    double brute = oracles::brute_conjugate_1d(
        [](double x) { return std::pow(x, 4) / 4; }, -2, 2, 1.0);
    CHECK(star4.values[j4] == doctest::Approx(brute).epsilon(1e-4));
}

TEST_CASE("dual box must cover the slope range") {
    auto q = SmoothConvexSpec::quadratic(Mat::identity(1), Vec::zero(1), 0,
                                         Domain::polytope(DomainPolytope::interval(-2, 2)));
    auto s = sample(q, GridSpec::make(1, Vec{-2}, Vec{2}, 101));
    DualGridSpec small;
    small.grid = GridSpec::make(1, Vec{-1}, Vec{1}, 51);
    CHECK_THROWS_WITH_AS(conjugate_sampled(s, small),
                         doctest::Contains("axis 0"), Error);
}

TEST_CASE("biconjugate: envelope property and fixed points") {
    // convex quadratic: sup-error <= 2h on interior nodes
    auto q = SmoothConvexSpec::quadratic(Mat::identity(1), Vec::zero(1), 0,
                                         Domain::polytope(DomainPolytope::interval(-1, 1)));
    auto g = GridSpec::make(1, Vec{-1}, Vec{1}, 201);
    auto s = sample(q, g);
    auto bi = biconjugate(s);
    double h = g.spacing()[0];
    for (long long i = 0; i < g.node_count(); ++i) {
        CHECK(bi.values[i] <= s.values[i] + 1e-12);
        double x = g.node(i)[0];
        if (std::fabs(x) <= 1 - 2 * h)
            CHECK(std::fabs(bi.values[i] - s.values[i]) <= 2 * h);
    }

    // |x| samples: exact at all nodes
    auto sa = sample(abs_pl(1), GridSpec::make(1, Vec{-1}, Vec{1}, 201));
    auto bia = biconjugate(sa);
    for (size_t i = 0; i < sa.values.size(); ++i)
        CHECK(bia.values[i] == doctest::Approx(sa.values[i]).epsilon(1e-12));

    // nonconvex cos on [-1,1]: biconjugate is the convex envelope (the chord),
    // strictly below at 0
    auto gc = GridSpec::make(1, Vec{-1}, Vec{1}, 201);
    SampledConvexFunction c;
    c.grid = gc;
    std::vector<double> xs;
    for (long long i = 0; i < gc.node_count(); ++i) {
        double x = gc.node(i)[0];
        xs.push_back(x);
        c.values.push_back(std::cos(x));
    }
    auto bic = biconjugate(c);
    long long mid = gc.node_count() / 2;
    CHECK(bic.values[mid] < std::cos(0.0) - 0.4);
    for (long long i = 0; i < gc.node_count(); i += 20) {
        double env = oracles::brute_envelope(xs, c.values, gc.node(i)[0]);
        CHECK(bic.values[i] == doctest::Approx(env).epsilon(0.02));
    }
}

TEST_CASE("biconjugate of 2-D samples stays below and close") {
    Mat A = Mat::zero(2);
    A(0, 0) = 2;
    A(1, 1) = 1;
    A(0, 1) = A(1, 0) = 0.5;
    auto q = SmoothConvexSpec::quadratic(A, Vec{0.1, -0.2}, 0,
                                         Domain::polytope(DomainPolytope::box(
                                             Box::cube(2, -1, 1))));
    auto g = GridSpec::make(2, Vec{-1, -1}, Vec{1, 1}, 101);
    auto s = sample(q, g);
    auto bi = biconjugate(s);
    double h = g.spacing()[0];
    double L = 0;
    auto [smin, smax] = slope_range(s);
    for (int d = 0; d < 2; ++d) L = std::max({L, std::fabs(smin[d]), std::fabs(smax[d])});
    for (long long i = 0; i < g.node_count(); ++i) {
        CHECK(bi.values[i] <= s.values[i] + 1e-9);
        Vec x = g.node(i);
        if (std::fabs(x[0]) <= 1 - 2 * h && std::fabs(x[1]) <= 1 - 2 * h)
            CHECK(std::fabs(bi.values[i] - s.values[i]) <= 2 * h * L);
    }
}

TEST_CASE("factorized transform equals the dense discrete conjugate") {
    // any data: the per-line hull maximization equals the max over all nodes
    RandomStream rng(21);
    auto g = GridSpec::make(2, Vec{-1, -1}, Vec{1, 1}, 17);
    SampledConvexFunction u;
    u.grid = g;
    for (long long i = 0; i < g.node_count(); ++i) {
        Vec x = g.node(i);
        double v = dot(x, x) + 0.3 * rng.next();  // noisy, not convex
        if (std::fabs(x[0]) > 0.9) v = kInf;      // ragged domain
        u.values.push_back(v);
    }
    DualGridSpec dual;
    dual.grid = GridSpec::make(2, Vec{-4, -4}, Vec{4, 4}, 13);
    auto star = conjugate_sampled(u, dual);
    for (long long j = 0; j < dual.grid.node_count(); ++j) {
        Vec y = dual.grid.node(j);
        double brute = -kInf;
        for (long long i = 0; i < g.node_count(); ++i) {
            if (!std::isfinite(u.values[i])) continue;
            brute = std::max(brute, dot(g.node(i), y) - u.values[i]);
        }
        CHECK(star.values[j] == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("3-D sampled conjugate and biconjugate") {
    auto g = GridSpec::make(3, Vec{-1, -1, -1}, Vec{1, 1, 1}, 21);
    Mat A = Mat::identity(3);
    A(0, 0) = 2;
    auto q = SmoothConvexSpec::quadratic(A, Vec::zero(3), 0,
                                         Domain::polytope(DomainPolytope::box(
                                             Box::cube(3, -1, 1))));
    auto s = sample(q, g);
    auto bi = biconjugate(s);
    double h = g.spacing()[0];
    auto [smin, smax] = slope_range(s);
    double L = 0;
    for (int d = 0; d < 3; ++d) L = std::max({L, std::fabs(smin[d]), std::fabs(smax[d])});
    for (long long i = 0; i < g.node_count(); ++i) {
        CHECK(bi.values[i] <= s.values[i] + 1e-9);
        Vec x = g.node(i);
        bool interior = true;
        for (int d = 0; d < 3; ++d)
            if (std::fabs(x[d]) > 1 - 2 * h) interior = false;
        if (interior) CHECK(std::fabs(bi.values[i] - s.values[i]) <= 2 * h * L);
    }
    // spot-check the conjugate against the dense maximum
    auto dual = DualGridSpec::auto_sized(s, 15);
    auto star = conjugate_sampled(s, dual);
    RandomStream rng(8);
    for (int t = 0; t < 5; ++t) {
        long long j = static_cast<long long>(rng.next() * star.values.size());
        Vec y = dual.grid.node(j);
        double brute = -kInf;
        for (long long i = 0; i < g.node_count(); ++i)
            brute = std::max(brute, dot(g.node(i), y) - s.values[i]);
        CHECK(star.values[j] == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("epigraph support-function identity") {
    auto ind = MaxAffineFunction::indicator(DomainPolytope::interval(-1, 1));
    CHECK(epigraph_support_check(ind, {Vec{-2}, Vec{0}, Vec{2}}) <= 1e-12);

    RandomStream rng(5);
    std::vector<Vec> ys;
    for (int i = 0; i < 100; ++i) ys.push_back(Vec{rng.uniform(-3, 3)});
    CHECK(epigraph_support_check(abs_pl(1), ys) <= 1e-12);

    auto box2 = MaxAffineFunction::indicator(DomainPolytope::box(Box::cube(2, -1, 1)));
    std::vector<Vec> circle;
    for (int i = 0; i < 32; ++i)
        circle.push_back(Vec{std::cos(i * M_PI / 16), std::sin(i * M_PI / 16)});
    CHECK(epigraph_support_check(box2, circle) <= 1e-12);
}

TEST_CASE("Fenchel-Young inequality with equality exactly on subdifferential pairs") {
    RandomStream rng(13);
    for (int inst = 0; inst < 10; ++inst) {
        auto stream = rng.split(inst);
        int n = 1 + (inst % 2);
        auto u = random_max_affine(stream, n);
        auto star = conjugate_pl(u);
        auto cells = pl_cells(u);
        for (const auto& c : cells) {
            if (c.volume <= 1e-10) continue;
            Vec x = Vec::zero(n);
            for (const auto& v : c.vertices) x = x + v;
            x = (1.0 / c.vertices.size()) * x;
            Vec p = u.slopes[c.piece];
            double fy = u.raw_max(x) + star.raw_max(p) - dot(x, p);
            CHECK(std::fabs(fy) <= 1e-9);  // equality on the subdifferential
            // off-subdifferential: strict inequality
            Vec p_off = p;
            p_off[0] += 3.0;
            double fy_off = u.raw_max(x) + star.raw_max(p_off) - dot(x, p_off);
            CHECK(fy_off >= -1e-9);
        }
    }
}

TEST_CASE("order reversal of conjugation") {
    auto u = abs_pl(1);
    auto v = MaxAffineFunction::make({Vec{1}, Vec{-1}}, {0.5, 0.5},
                                     DomainPolytope::interval(-1, 1));  // v = |x| + 1/2 >= u
    auto ustar = conjugate_pl(u);
    auto vstar = conjugate_pl(v);
    for (double y = -3; y <= 3; y += 0.25)
        CHECK(ustar.raw_max(Vec{y}) >= vstar.raw_max(Vec{y}) - 1e-12);

    auto us = sample(u, GridSpec::make(1, Vec{-1}, Vec{1}, 101));
    auto vs = sample(v, GridSpec::make(1, Vec{-1}, Vec{1}, 101));
    auto dual = DualGridSpec::auto_sized(us);
    auto uss = conjugate_sampled(us, dual);
    auto vss = conjugate_sampled(vs, dual);
    for (size_t i = 0; i < uss.values.size(); ++i)
        CHECK(uss.values[i] >= vss.values[i] - 1e-12);
}

TEST_CASE("conjugation is continuous along tangent families") {
    auto huber = SmoothConvexSpec::huber(1, 1.0, 1.0);  // limit of the tangents
    // u_k* -> u* uniformly on a compact probe; report the rate
    std::vector<double> errs;
    for (int k : {4, 8, 16, 32, 64}) {
        auto uk = tangent_pl(1, k, 1.0, 1.0);
        auto star = conjugate_pl(MaxAffineFunction::make(
            uk.slopes, uk.intercepts, DomainPolytope::interval(-3, 3)));
        double err = 0;
        for (double y = -0.9; y <= 0.9; y += 0.05) {
            // conjugate of huber with curvature/core 1 is y^2/2 + indicator
            double expect = y * y / 2;
            err = std::max(err, std::fabs(star.raw_max(Vec{y}) - expect));
        }
        errs.push_back(err);
    }
    for (size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] <= errs[i - 1] + 1e-12);
    CHECK(errs.back() <= 1e-3);
}
