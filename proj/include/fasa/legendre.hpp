#pragma once

#include "fasa/convex_core.hpp"

namespace fasa {

// Grid in the slope variable y. The box must cover the slope range of the
// primal function (checked against forward differences).
struct DualGridSpec {
    GridSpec grid;

    // Slope range from forward differences, inflated 10%, snapped so the raw
    // range endpoints land on nodes (keeps PL conjugates exact at nodes).
    static DualGridSpec auto_sized(const SampledConvexFunction& u, int m = 0);
};

// Per-axis [min,max] of forward differences over finite value pairs.
std::pair<Vec, Vec> slope_range(const SampledConvexFunction& u);

// Exact conjugate of a compact-domain max-affine function: one piece
// (x_v, -u(x_v)) per subdivision vertex x_v; finite-valued on R^n.
MaxAffineFunction conjugate_pl(const MaxAffineFunction& u);

// Discrete Legendre transform u*(y_j) = max_i <x_i,y_j> - u(x_i), computed
// axis-by-axis in linear time per line. Throws when the dual box does not
// cover the slope range on some axis.
SampledConvexFunction conjugate_sampled(const SampledConvexFunction& u,
                                        const DualGridSpec& dual);

// conjugate_sampled twice with an auto-sized dual grid; lands back on u.grid.
// Result <= u nodewise; equals the convex envelope of the samples up to O(h).
SampledConvexFunction biconjugate(const SampledConvexFunction& u);

// Max over y-samples of |conjugate_pl(u)(y) - h_K(y,-1)| where K is the
// epigraph truncated at max u over the domain.
double epigraph_support_check(const MaxAffineFunction& u, const std::vector<Vec>& ys);

}  // namespace fasa
