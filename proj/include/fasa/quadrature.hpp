#pragma once

#include "fasa/convex_core.hpp"

namespace fasa {

struct QuadOptions {
    int base_per_axis = 0;       // 0 = pick by dimension
    int max_depth = 0;           // interior refinement cap
    int max_depth_boundary = 0;  // straddling-cell bisection cap
    double rel_tol = 1e-5;       // global: absolute share per unit volume
    double cell_rel_tol = 1e-2;  // local: accept once the halving step moves
                                 // a cell by less than this fraction of itself
    long long eval_budget = 0;   // 0 = pick by dimension

    static QuadOptions defaults(int n);
    QuadOptions resolved(int n) const;
};

struct QuadResult {
    double value = 0;
    double error_estimate = 0;     // per-cell Richardson deltas plus boundary residual
    double boundary_residual = 0;  // straddling cells estimated at the depth cap
    long long evals = 0;
    bool converged = true;
};

// Adaptive midpoint quadrature of f over region (intersected with clip when
// given). Cells fully inside the convex region use midpoint values with one
// halving step as the refinement test; cells straddling the boundary bisect
// until the depth cap and are then estimated from an interior subgrid point
// weighted by the inside fraction. Deterministic cell order.
QuadResult integrate(const Domain& region, const std::optional<Box>& clip,
                     const std::function<double(const Vec&)>& f, QuadOptions opt = {});

}  // namespace fasa
