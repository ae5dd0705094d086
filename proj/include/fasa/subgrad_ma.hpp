#pragma once

#include "fasa/legendre.hpp"

namespace fasa {

// V-representation of a subdifferential: convex hull of the active slopes
// plus recession generators (outer normals of active domain facets).
struct SubdifferentialSet {
    std::vector<Vec> hull_points;
    std::vector<Vec> recession;

    bool empty() const { return hull_points.empty(); }
};

SubdifferentialSet subdifferential_pl(const MaxAffineFunction& u, const Vec& x);

// Hybrid measure: finite atom list plus an optional cell density for the
// absolutely continuous part.
struct MongeAmpereMeasure {
    struct Atom {
        Vec x;
        double mass;
    };
    std::vector<Atom> atoms;
    std::optional<GridSpec> density_grid;  // density values at cell centers, (m-1)^n cells
    std::vector<double> density;
    double support_radius = 0;

    double total_atom_mass() const;
    double atom_mass_in(const Box& b) const;
    double density_integral(const Box& b) const;  // exact cell-overlap sum
    double total_mass() const;
};

// Purely atomic MA measure of a finite-valued max-affine function (n <= 2):
// one atom per subdivision vertex, mass = volume of the hull of active slopes.
MongeAmpereMeasure ma_atoms_pl(const MaxAffineFunction& v);

// det-Hessian cell density of a smooth specimen (analytic Hessian when
// available, central finite differences otherwise).
MongeAmpereMeasure ma_density_smooth(const SmoothConvexSpec& spec, const GridSpec& grid);

// MA(v; B): atoms-in-box mass plus density integral. Smooth specimens
// integrate det Hess directly; PL n >= 3 is rejected in favor of
// ma_box_montecarlo.
double ma_box(const Specimen& v, const Box& b);

struct MonteCarloEstimate {
    double value = 0;
    double std_error = 0;
    double ci95_half = 0;
    long long samples = 0;
};

// Gradient-sampling hull-volume estimator of V_n(dv(B)) for PL inputs;
// reported with a batch-means 95% confidence half-width. Rough path, n <= 3.
MonteCarloEstimate ma_box_montecarlo(const MaxAffineFunction& v, const Box& b,
                                     long long samples, RandomStream rng);

struct MassCheck {
    double lhs = 0;  // total atom mass of MA(conjugate)
    double rhs = 0;  // volume of dom(u)
    double gap = 0;
};

// V_n(du*(R^n)) = V_n(dom u), checked through exact conjugation (n <= 2).
MassCheck total_mass_check(const MaxAffineFunction& u);

// Worst Fenchel-Young violation |u(x) + u*(p) - <x,p>| over (x, p) pairs
// with p in du(x); certifies x in du*(p).
double subdiff_duality_check(const MaxAffineFunction& u,
                             const std::vector<std::pair<Vec, Vec>>& pairs);

// Continuous test function with compact support box.
struct TestFunction {
    std::function<double(const Vec&)> f;
    Box support;
};

// integral of beta against MA(v; .): atom sum plus density quadrature.
double ma_integral(const Specimen& v, const TestFunction& beta);

// Smallest R with supp MA(v) inside R*B^n (compact-domain specimens fall back
// to the domain circumradius, where the measure lives).
double ma_support_radius(const Specimen& v);

// Radon-measure family contract; the shipped instance is Monge-Ampere.
class MeasureFamily {
  public:
    virtual ~MeasureFamily() = default;
    virtual double measure_of(const Specimen& v, const Box& b) const = 0;
    virtual double density_at(const Specimen& v, const Vec& x) const = 0;
};

class MongeAmpereFamily final : public MeasureFamily {
  public:
    double measure_of(const Specimen& v, const Box& b) const override;
    double density_at(const Specimen& v, const Vec& x) const override;
};

}  // namespace fasa
