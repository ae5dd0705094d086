#include "fasa/catalog.hpp"

#include <algorithm>

namespace fasa {

MaxAffineFunction abs_pl(int n) {
    if (n == 1)
        return MaxAffineFunction::make({Vec{1}, Vec{-1}}, {0, 0},
                                       DomainPolytope::interval(-1, 1));
    require(n == 2, "abs_pl: n must be 1 or 2");
    return MaxAffineFunction::make({Vec{1, 0}, Vec{-1, 0}, Vec{0, 1}, Vec{0, -1}},
                                   {0, 0, 0, 0}, DomainPolytope::box(Box::cube(2, -1, 1)));
}

std::vector<NamedSpecimen> shipped_specimens() {
    std::vector<NamedSpecimen> out;
    out.push_back({"quadratic_1d",
                   SmoothConvexSpec::quadratic(Mat::identity(1), Vec::zero(1), 0,
                                               Domain::polytope(DomainPolytope::interval(-2, 2)))});
    Mat A2 = Mat::zero(2);
    A2(0, 0) = 2;
    A2(1, 1) = 1;
    A2(0, 1) = A2(1, 0) = 0.5;
    out.push_back({"quadratic_2d",
                   SmoothConvexSpec::quadratic(A2, Vec{0.1, -0.2}, 0,
                                               Domain::polytope(DomainPolytope::box(
                                                   Box::cube(2, -1, 1))))});
    out.push_back({"quadratic_ball_1d",
                   SmoothConvexSpec::quadratic(Mat::identity(1, 2.0), Vec::zero(1), 0,
                                               Domain::ball(Vec::zero(1), 1.0))});
    out.push_back({"hemisphere_1d", SmoothConvexSpec::hemisphere(1, 1.0)});
    out.push_back({"hemisphere_2d", SmoothConvexSpec::hemisphere(2, 1.0)});
    out.push_back({"huber_1d", SmoothConvexSpec::huber(1, 1.0, 1.0)});
    out.push_back({"huber_2d", SmoothConvexSpec::huber(2, 1.0, 1.0)});
    out.push_back({"radial_power4_1d",
                   SmoothConvexSpec::radial_power(
                       1, 4.0, Domain::polytope(DomainPolytope::interval(-2, 2)))});
    out.push_back({"abs_pl_1d", abs_pl(1)});
    out.push_back({"box_indicator_1d",
                   MaxAffineFunction::indicator(DomainPolytope::interval(-1, 1))});
    out.push_back({"cross_pl_2d", abs_pl(2)});
    out.push_back({"box_indicator_2d",
                   MaxAffineFunction::indicator(DomainPolytope::box(Box::cube(2, -1, 1)))});
    return out;
}

MaxAffineFunction tangent_pl(int n, int k, double curvature, double half_width) {
    require(n == 1, "tangent_pl: 1-D tangent families only");
    require(k >= 1, "tangent_pl: need at least one tangent");
    std::vector<Vec> slopes;
    std::vector<double> inter;
    for (int i = 0; i < k; ++i) {
        double t = -half_width + 2 * half_width * (i + 0.5) / k;
        slopes.push_back(Vec{curvature * t});
        inter.push_back(-0.5 * curvature * t * t);
    }
    return MaxAffineFunction::make_finite(std::move(slopes), std::move(inter), 1);
}

MaxAffineFunction random_max_affine(RandomStream& rng, int n) {
    require(n == 1 || n == 2, "random_max_affine: n must be 1 or 2");
    if (n == 1) {
        double lo = -0.5 - 1.5 * rng.next();
        double hi = 0.5 + 1.5 * rng.next();
        int p = 2 + static_cast<int>(rng.next() * 5);
        std::vector<Vec> slopes;
        std::vector<double> inter;
        for (int i = 0; i < p; ++i) {
            double s = -3.0 + 6.0 * (i + 0.2 + 0.6 * rng.next()) / p;
            slopes.push_back(Vec{s});
            inter.push_back(rng.uniform(-1, 1));
        }
        return MaxAffineFunction::make(std::move(slopes), std::move(inter),
                                       DomainPolytope::interval(lo, hi));
    }
    std::vector<Vec> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(Vec{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)});
    DomainPolytope dom;
    auto hull = convex_hull_2d(pts);
    if (hull.size() >= 3)
        dom = DomainPolytope::from_points(2, pts);
    else
        dom = DomainPolytope::box(Box::cube(2, -1 - rng.next(), 1 + rng.next()));
    int p = 3 + static_cast<int>(rng.next() * 4);
    std::vector<Vec> slopes;
    std::vector<double> inter;
    for (int i = 0; i < p; ++i) {
        double th = 2 * M_PI * (i + 0.3 + 0.4 * rng.next()) / p;
        double r = rng.uniform(0.5, 2.0);
        slopes.push_back(Vec{r * std::cos(th), r * std::sin(th)});
        inter.push_back(rng.uniform(-0.5, 0.5));
    }
    return MaxAffineFunction::make(std::move(slopes), std::move(inter), std::move(dom));
}

SequenceFamily example_blowup_family(int n, std::vector<int> schedule) {
    auto gen = [n](int k) -> Specimen {
        return SmoothConvexSpec::quadratic(Mat::identity(n, 2.0 * k), Vec::zero(n), 0,
                                           Domain::ball(Vec::zero(n), 1.0));
    };
    Specimen limit = MaxAffineFunction::indicator(DomainPolytope::point(Vec::zero(n)));
    return SequenceFamily::make("example-blowup", gen, limit, std::move(schedule),
                                SequenceFamily::Mode::epi);
}

SequenceFamily tangent_family(int n, std::vector<int> schedule, double curvature,
                              double half_width) {
    require(n == 1, "tangent_family: 1-D only");
    auto gen = [curvature, half_width](int k) -> Specimen {
        return tangent_pl(1, k, curvature, half_width);
    };
    Specimen limit = SmoothConvexSpec::huber(1, curvature, half_width);
    return SequenceFamily::make("pl-tangent", gen, limit, std::move(schedule),
                                SequenceFamily::Mode::tau);
}

SequenceFamily mollified_quadratic_family(int n, std::vector<int> schedule, double k_curv,
                                          double half_width) {
    Domain dom = Domain::polytope(DomainPolytope::box(Box::cube(n, -half_width, half_width)));
    auto gen = [n, k_curv, dom](int k) -> Specimen {
        return SmoothConvexSpec::quadratic(Mat::identity(n, k_curv * (1.0 + 1.0 / k)),
                                           Vec::zero(n), 0, dom);
    };
    Specimen limit =
        SmoothConvexSpec::quadratic(Mat::identity(n, k_curv), Vec::zero(n), 0, dom);
    return SequenceFamily::make("mollified-quadratic", gen, limit, std::move(schedule),
                                SequenceFamily::Mode::tau);
}

SequenceFamily huber_curvature_family(int n, std::vector<int> schedule, double core_radius) {
    auto gen = [n, core_radius](int k) -> Specimen {
        return SmoothConvexSpec::huber(n, 1.0 + 1.0 / k, core_radius);
    };
    Specimen limit = SmoothConvexSpec::huber(n, 1.0, core_radius);
    return SequenceFamily::make("huber-curvature", gen, limit, std::move(schedule),
                                SequenceFamily::Mode::tau_star);
}

SequenceFamily sqrt_smoothing_family(std::vector<int> schedule) {
    auto gen = [](int k) -> Specimen {
        double eps2 = 1.0 / k;
        auto value = [eps2](const Vec& x) { return std::sqrt(x[0] * x[0] + eps2); };
        auto grad = [eps2](const Vec& x) {
            return Vec{x[0] / std::sqrt(x[0] * x[0] + eps2)};
        };
        auto hess = [eps2](const Vec& x) {
            Mat h = Mat::zero(1);
            double s = x[0] * x[0] + eps2;
            h(0, 0) = eps2 / (s * std::sqrt(s));
            return h;
        };
        return SmoothConvexSpec::custom(1, Domain::all(1, Box::of(-2, 2)), value, grad, hess);
    };
    Specimen limit = MaxAffineFunction::make_finite({Vec{1}, Vec{-1}}, {0, 0}, 1);
    return SequenceFamily::make("sqrt-smoothing", gen, limit, std::move(schedule),
                                SequenceFamily::Mode::epi);
}

SequenceFamily random_pl_family(RandomStream& rng, int n, std::vector<int> schedule,
                                bool steep) {
    MaxAffineFunction base = random_max_affine(rng, n);
    std::vector<double> perturb;
    for (size_t i = 0; i < base.piece_count(); ++i) perturb.push_back(rng.uniform(-0.5, 0.5));
    // steep piece grazes the midpoint of the widest domain facet, so its
    // active cell is a slab with robustly positive measure
    Vec far = base.domain.vertices().front();
    Vec dir = Vec::zero(n);
    dir[0] = 1;
    if (n == 1) {
        Box bb = base.domain.bounding_box();
        far = Vec{bb.hi[0]};
    } else {
        const auto& vs = base.domain.vertices();
        double best_len = -1;
        for (size_t i = 0; i < vs.size(); ++i) {
            const Vec& a = vs[i];
            const Vec& b = vs[(i + 1) % vs.size()];
            double len = dist(a, b);
            if (len > best_len) {
                best_len = len;
                far = 0.5 * (a + b);
                Vec e = b - a;
                dir = Vec{e[1] / len, -e[0] / len};  // outward normal for CCW order
            }
        }
    }

    auto gen = [base, perturb, dir, far, steep](int k) -> Specimen {
        MaxAffineFunction u = base;
        double decay = 1.0 / (static_cast<double>(k) * k);
        for (size_t i = 0; i < u.intercepts.size(); ++i) u.intercepts[i] += perturb[i] * decay;
        if (steep) {
            double uv = u.raw_max(far);
            Vec slope = static_cast<double>(k) * dir;
            double inter = uv + decay - dot(slope, far);
            u.slopes.push_back(slope);
            u.intercepts.push_back(inter);
        }
        return u;
    };
    return SequenceFamily::make(steep ? "random-pl-steep" : "random-pl", gen, base,
                                std::move(schedule),
                                steep ? SequenceFamily::Mode::epi : SequenceFamily::Mode::tau);
}

}  // namespace fasa
