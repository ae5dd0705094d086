#pragma once

#include "fasa/quadrature.hpp"
#include "fasa/subgrad_ma.hpp"

namespace fasa {

// Concave integrand class: zeta >= 0, zeta(0) = 0, zeta(t)/t -> 0,
// non-decreasing, zeta(t)/t non-increasing. Construction validates on a log
// grid and throws on any class violation.
class ZetaConcave {
  public:
    enum class Kind { power, log1p, ratio, cap, custom };

    static ZetaConcave power(double q);          // t^q, q in (0,1)
    static ZetaConcave log1p();                  // log(1+t)
    static ZetaConcave ratio();                  // t/(1+t)
    static ZetaConcave cap(double c);            // min(t, c)
    static ZetaConcave custom(std::function<double(double)> fn, std::string name);

    double operator()(double t) const;
    Kind kind() const { return kind_; }
    double param() const { return param_; }
    const std::string& name() const { return name_; }

  private:
    ZetaConcave() = default;
    void validate() const;
    Kind kind_ = Kind::custom;
    double param_ = 0;
    std::function<double(double)> fn_;
    std::string name_;
};

// zeta~(t) = zeta(1/t) * t, zeta~(0) = 0; an involution on the class.
ZetaConcave zeta_dual(const ZetaConcave& z);

// Decreasing convex integrand class: values in (0, +inf], zeta(0) may be
// +inf, zeta(t) -> 0.
class ZetaConvexDecreasing {
  public:
    enum class Kind { exp_neg, inv_1pt, inv_power, custom };

    static ZetaConvexDecreasing exp_neg();           // e^{-t}
    static ZetaConvexDecreasing inv_1pt();           // (1+t)^{-1}
    static ZetaConvexDecreasing inv_power(double q); // t^{-q}, zeta(0) = +inf
    static ZetaConvexDecreasing custom(std::function<double(double)> fn, std::string name);

    double operator()(double t) const;
    bool infinite_at_zero() const;
    Kind kind() const { return kind_; }
    double param() const { return param_; }
    const std::string& name() const { return name_; }

  private:
    ZetaConvexDecreasing() = default;
    void validate() const;
    Kind kind_ = Kind::custom;
    double param_ = 0;
    std::function<double(double)> fn_;
    std::string name_;
};

// Non-negative continuous weight omega(x, t).
struct WeightSpec {
    enum class Kind { one, exp_decay, custom };
    Kind kind = Kind::one;
    int n = 1;  // exp_decay: e^{-n t / (n+2)}
    std::function<double(const Vec&, double)> fn;
    std::string name = "1";

    static WeightSpec one();
    static WeightSpec exp_decay(int n);
    static WeightSpec custom(std::function<double(const Vec&, double)> f, std::string name);
    double operator()(const Vec& x, double t) const;
};

struct FunctionalValue {
    double value = 0;  // may be +inf
    double error_estimate = 0;
    double ac_part = 0;  // singular parts never contribute
    std::string infinity_reason;  // "zeta-infinite-at-0" | "divergent-quadrature" | ""
    bool quadrature_converged = true;

    bool finite() const { return std::isfinite(value); }
};

// Z(u) = integral over dom(u) of zeta(det Hess u); exact 0 for PL input.
FunctionalValue Z_primal(const Specimen& u, const ZetaConcave& zeta, QuadOptions opt = {});

// Dual-side functional: integrate over the Monge-Ampere support box only.
FunctionalValue Z_dual(const Specimen& v, const ZetaConcave& zeta, QuadOptions opt = {});

// Weighted variant: zeta(phi(v;x)) * omega(x, v(x)).
FunctionalValue Z_weighted(const Specimen& v, const ZetaConcave& zeta, const WeightSpec& omega,
                           QuadOptions opt = {});

// Lower-semicontinuity functional on a compact box C, value in [0, +inf].
FunctionalValue Z_lower(const Specimen& v, const ZetaConvexDecreasing& zeta, const Box& C,
                        const WeightSpec& omega = WeightSpec::one(), QuadOptions opt = {});

struct JensenResult {
    double lhs = 0;  // mean of zeta o f
    double rhs = 0;  // zeta(mean of f)
    bool ok = false;
};

// Non-negative scalar field on a grid (no convexity requirement).
struct GridFunction {
    GridSpec grid;
    std::vector<double> values;
};

JensenResult jensen_check(const ZetaConcave& zeta, const GridFunction& f, const Box& C);
JensenResult jensen_check(const ZetaConvexDecreasing& zeta, const GridFunction& f, const Box& C);

struct DualityGap {
    double primal = 0;
    double dual = 0;
    double gap = 0;
    double combined_error = 0;
};

// |Z_primal(u, zeta) - Z_dual(u*, zeta~)| through a closed-form conjugate.
DualityGap duality_gap(const Specimen& u, const ZetaConcave& zeta, QuadOptions opt = {});

// Closed-form conjugates: PL via conjugate_pl; quadratics on boxes/intervals
// via the huber family (diagonal A in 2-D). Throws otherwise.
Specimen conjugate_specimen(const Specimen& u);

}  // namespace fasa
