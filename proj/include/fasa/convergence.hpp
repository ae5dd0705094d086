#pragma once

#include "fasa/functionals.hpp"

namespace fasa {

// Parameterized family k -> u_k with a declared limit; the unit of
// semicontinuity experiments.
struct SequenceFamily {
    enum class Mode { none, epi, tau, tau_star };

    std::string name;
    std::function<Specimen(int)> generator;
    Specimen limit;
    std::vector<int> schedule;
    Mode claimed = Mode::none;

    static SequenceFamily make(std::string name, std::function<Specimen(int)> gen,
                               Specimen limit, std::vector<int> schedule,
                               Mode claimed = Mode::none);
};

std::vector<int> geometric_schedule(int k_max);  // 1, 2, 4, ..., k_max

struct ProbeTrace {
    Box probe;
    bool exterior = false;           // probe lies outside dom(limit)
    std::vector<double> errors;      // interior: sup |u_k - u|; exterior: 1/(1 + inf u_k)
    std::vector<double> inf_values;  // exterior probes only
};

struct ConvergenceReport {
    std::vector<int> ks;
    std::vector<ProbeTrace> probes;
    std::vector<double> lipschitz;       // per k
    std::vector<double> support_radius;  // per k
    bool epi_certified = false;
    bool tau_certified = false;
    bool tau_star_certified = false;
    double lipschitz_bound = kInf;
    double support_bound = kInf;
    std::string detail;
};

// Interior probe (domain shrunk 5% per side, domain-aware) plus one exterior
// probe when dom(limit) is not all of R^n.
std::vector<Box> default_probes(const Specimen& limit);

ConvergenceReport epi_convergence_estimate(const SequenceFamily& family,
                                           const std::vector<Box>& probes);

// epi plus uniformly bounded Lipschitz constants.
ConvergenceReport tau_check(const SequenceFamily& family);

// epi plus uniformly bounded Monge-Ampere support radii.
ConvergenceReport tau_star_check(const SequenceFamily& family);

struct TransportReport {
    ConvergenceReport primal;     // tau side
    ConvergenceReport dual;       // tau* side of the conjugate family
    bool agree = false;           // certifications match
    double bound_gap = 0;         // max_k |L_k - support_radius(conj_k)|
    SequenceFamily conjugate_family;
};

// Conjugate the family exactly (PL, n <= 2) and compare tau against tau*.
TransportReport duality_transport(const SequenceFamily& family);

// Which functional a semicontinuity experiment runs.
struct FunctionalDescriptor {
    enum class Mode { upper, lower };
    Mode mode = Mode::upper;
    std::optional<ZetaConcave> zeta_concave;       // upper mode
    std::optional<ZetaConvexDecreasing> zeta_cvx;  // lower mode
    std::optional<WeightSpec> omega;
    std::optional<Box> C;  // lower mode
    QuadOptions quad;

    static FunctionalDescriptor upper(ZetaConcave z);
    static FunctionalDescriptor upper_weighted(ZetaConcave z, WeightSpec w);
    static FunctionalDescriptor lower(ZetaConvexDecreasing z, Box C);
};

struct VerdictRecord {
    std::string family;
    std::string functional;
    bool pass = false;
    std::vector<int> ks;
    std::vector<double> z_values;        // Z(u_k), +inf allowed
    std::vector<double> lipschitz;       // per k
    std::vector<double> support_radius;  // per k
    double z_limit = 0;
    double proxy = 0;    // extremum of the final window
    double gap = 0;      // signed slack of the semicontinuity inequality
    int burn_in_k = -1;  // first k from which the inequality holds onward (-1: never)
    std::string notes;
};

inline constexpr double kTolSc = 0.02;
inline constexpr double kTolAbs = 1e-6;

// Finite-k semicontinuity proxy: the limsup/liminf is approximated by the
// extremum over the last 3 schedule points; the full trajectory is recorded.
VerdictRecord semicontinuity_verdict(const SequenceFamily& family,
                                     const FunctionalDescriptor& fd, bool parallel = false);

// integral of beta against MA(u_k) minus the same against MA(limit).
double weak_star_gap(const SequenceFamily& family, const TestFunction& beta, int k);

// Companion compact-set diagnostic: MA(u_k; C) - MA(limit; C).
double weak_star_compact_diag(const SequenceFamily& family, const Box& C, int k);

// Lipschitz data of one specimen (slope norms for PL, max gradient norm on an
// interior grid for smooth specimens).
double specimen_lipschitz(const Specimen& s);

}  // namespace fasa
