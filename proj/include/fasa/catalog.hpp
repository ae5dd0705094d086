#pragma once

#include "fasa/convergence.hpp"

namespace fasa {

struct NamedSpecimen {
    std::string name;
    Specimen specimen;
};

// Canonical specimens exercised by the validation and involution suites.
std::vector<NamedSpecimen> shipped_specimens();

// |x| on [-1,1]^n as a max-affine function (n <= 2).
MaxAffineFunction abs_pl(int n);

// Random compact-domain max-affine instance (n in {1,2}), full-dimensional
// domain, slopes separated enough to keep the subdivision non-degenerate.
MaxAffineFunction random_max_affine(RandomStream& rng, int n);

// k tangents of 0.5*k2*x^2 at points spread over [-1,1]-scaled domains.
MaxAffineFunction tangent_pl(int n, int k, double curvature, double half_width);

// u_k = k <x,x> + indicator of the unit ball; epi-limit is the indicator of
// the origin. The standard witness that epi-convergence alone does not bound
// Lipschitz constants.
SequenceFamily example_blowup_family(int n, std::vector<int> schedule);

// PL tangent approximations of a parabola; tau-convergent, limit huber.
SequenceFamily tangent_family(int n, std::vector<int> schedule, double curvature = 1.0,
                              double half_width = 1.0);

// Mollified smooth family u_k = (1 + 1/k)-scaled quadratic on a compact box.
SequenceFamily mollified_quadratic_family(int n, std::vector<int> schedule, double k_curv,
                                          double half_width);

// Compact-MA-support huber family with curvature 1 + 1/k, fixed core.
SequenceFamily huber_curvature_family(int n, std::vector<int> schedule, double core_radius);

// v_k(x) = sqrt(x^2 + 1/k) -> |x| (n = 1); smooth custom specimens with
// analytic Hessians. The weak* test family.
SequenceFamily sqrt_smoothing_family(std::vector<int> schedule);

// Random tau-convergent PL family: fixed random instance with 1/k intercept
// perturbations. When steep = true an extra piece of slope ~k grazes the
// domain boundary: still epi-convergent, Lipschitz constants diverge.
SequenceFamily random_pl_family(RandomStream& rng, int n, std::vector<int> schedule,
                                bool steep);

}  // namespace fasa
