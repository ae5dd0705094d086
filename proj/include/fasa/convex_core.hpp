#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "fasa/geometry.hpp"

namespace fasa {

// Effective domain of a specimen: compact polytope, compact ball, or all of
// R^n (finite-valued functions; bbox_hint bounds where anything interesting
// happens, e.g. the Monge-Ampere support).
struct Domain {
    enum class Shape { polytope, ball, all_space };
    Shape shape = Shape::all_space;
    DomainPolytope poly;  // shape == polytope
    Vec center;           // shape == ball
    double radius = 0;
    Box bbox_hint{Vec{-1}, Vec{1}};  // shape == all_space

    static Domain polytope(DomainPolytope p);
    static Domain ball(Vec center, double radius);
    static Domain all(int n, Box hint);

    int dim() const;
    bool contains(const Vec& x, double tol = 1e-9) const;
    // Signed distance-like margin to the boundary (> 0 inside).
    double margin(const Vec& x) const;
    Box bounding_box() const;
    double volume() const;  // +inf for all_space
    bool is_all_space() const { return shape == Shape::all_space; }
    int affine_dim() const;
};

// Finite max of affine pieces plus a polytopal domain; +inf outside.
struct MaxAffineFunction {
    std::vector<Vec> slopes;
    std::vector<double> intercepts;
    DomainPolytope domain;
    bool finite_valued = false;  // domain is an artificial huge box standing in for R^n

    static MaxAffineFunction make(std::vector<Vec> slopes, std::vector<double> intercepts,
                                  DomainPolytope domain);
    // Finite-valued on R^n, domain encoded as a huge box.
    static MaxAffineFunction make_finite(std::vector<Vec> slopes,
                                         std::vector<double> intercepts, int n);
    static MaxAffineFunction indicator(DomainPolytope domain);

    int dim() const { return domain.dim(); }
    size_t piece_count() const { return slopes.size(); }
    // max of the affine pieces, ignoring the domain
    double raw_max(const Vec& x) const;
    double value(const Vec& x) const;  // +inf outside domain
    std::vector<int> active_pieces(const Vec& x) const;
    double active_tol(double maxval) const;  // eps_act
};

inline constexpr double kHugeBox = 1e8;

enum class SmoothKind { quadratic, hemisphere, huber, radial_power, custom };

// Analytic convex specimen: value/gradient/Hessian, closed-form for the named
// kinds, finite differences for custom evaluators without derivatives.
struct SmoothConvexSpec {
    SmoothKind kind = SmoothKind::custom;
    Domain domain;

    // quadratic: 0.5 x'Ax + b'x + c
    Mat A;
    Vec b;
    double c = 0;
    double radius = 1;     // hemisphere / huber core radius
    double curvature = 1;  // huber curvature inside the core
    double power = 2;      // radial power exponent

    std::function<double(const Vec&)> value_fn;
    std::function<Vec(const Vec&)> grad_fn;
    std::function<Mat(const Vec&)> hess_fn;
    std::optional<double> declared_support_radius;
    // Region carrying the Monge-Ampere mass, when known exactly (huber core
    // ball, conjugate-of-box support box); lets dual-side integrals classify
    // the density discontinuity as a boundary.
    std::optional<Domain> ma_support_hint;
    std::string label;

    static SmoothConvexSpec quadratic(Mat A, Vec b, double c, Domain dom);
    static SmoothConvexSpec hemisphere(int n, double r);
    static SmoothConvexSpec huber(int n, double curvature, double core_radius);
    static SmoothConvexSpec radial_power(int n, double p, Domain dom);
    static SmoothConvexSpec custom(int n, Domain dom, std::function<double(const Vec&)> value,
                                   std::function<Vec(const Vec&)> grad = nullptr,
                                   std::function<Mat(const Vec&)> hess = nullptr);

    int dim() const { return domain.dim(); }
    double value(const Vec& x) const;  // +inf outside domain
    Vec gradient(const Vec& x, double h_fd = 1e-4) const;
    Mat hessian(const Vec& x, double h_fd = 1e-4) const;
    double det_hess(const Vec& x, double h_fd = 1e-4) const;
    bool has_analytic_hessian() const;
    // Radius of the ball carrying the Monge-Ampere mass, when known/declared.
    std::optional<double> support_radius() const;

    // Hessian PSD spot-check on an interior validation grid; throws on failure.
    void validate(int validation_m = 9) const;
};

using Specimen = std::variant<MaxAffineFunction, SmoothConvexSpec>;

int specimen_dim(const Specimen& s);
double specimen_value(const Specimen& s, const Vec& x);
Domain specimen_domain(const Specimen& s);
bool specimen_finite_valued(const Specimen& s);
const MaxAffineFunction* as_pl(const Specimen& s);
const SmoothConvexSpec* as_smooth(const Specimen& s);

// Grid samples of a convex function, entries in R union {+inf}.
struct SampledConvexFunction {
    GridSpec grid;
    std::vector<double> values;

    double at(long long flat) const { return values[flat]; }
    bool any_finite() const;
    double finite_max_abs() const;
};

struct ConvexityReport {
    bool pass = false;
    double worst_violation = 0;
    std::string note;
};

// Midpoint convexity along grid axes and diagonals, extended-real rules.
// Throws when every entry is +inf.
ConvexityReport validate_convexity(const SampledConvexFunction& f, double eps_cvx);
double recommended_eps_cvx(const SampledConvexFunction& f, double hessian_bound = 0.0);

SampledConvexFunction sample(const Specimen& spec, const GridSpec& grid);

// One region of the polyhedral subdivision induced by the pieces: where a
// given piece attains the max, intersected with the domain.
struct PLCell {
    int piece = 0;
    std::vector<Vec> vertices;
    double volume = 0;
};

// Subdivision cells with non-empty vertex sets (n <= 2).
std::vector<PLCell> pl_cells(const MaxAffineFunction& u);

// Deduped union of all cell vertices: breakpoints, domain vertices, and
// piece-intersection points.
std::vector<Vec> pl_subdivision_vertices(const MaxAffineFunction& u);

// Lipschitz constant of a max-affine function on the (relative) interior of
// its domain: max slope norm over pieces active on a positive-measure set.
double lipschitz_constant(const MaxAffineFunction& u);

}  // namespace fasa
