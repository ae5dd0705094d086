#pragma once

#include <json.hpp>

#include "fasa/convergence.hpp"

namespace fasa {

using json = nlohmann::ordered_json;

// Extended reals: +inf encodes as the string "inf".
json num_to_json(double v);
double num_from_json(const json& j);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

json box_to_json(const Box& b);
Box box_from_json(const json& j);

json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j);

json polytope_to_json(const DomainPolytope& p);
DomainPolytope polytope_from_json(const json& j);

json domain_to_json(const Domain& d);
Domain domain_from_json(const json& j);

// {"kind": "max_affine" | "quadratic" | "hemisphere" | "huber" |
//  "radial_power", fields...}; custom evaluators are not serializable.
json specimen_to_json(const Specimen& s);
Specimen specimen_from_json(const json& j);

json sampled_to_json(const SampledConvexFunction& f);
SampledConvexFunction sampled_from_json(const json& j);

json measure_to_json(const MongeAmpereMeasure& mu);
MongeAmpereMeasure measure_from_json(const json& j);

json functional_value_to_json(const FunctionalValue& fv);

json zeta_to_json(const ZetaConcave& z);
ZetaConcave zeta_from_json(const json& j);

json zeta_cvx_to_json(const ZetaConvexDecreasing& z);
ZetaConvexDecreasing zeta_cvx_from_json(const json& j);

json weight_to_json(const WeightSpec& w);
WeightSpec weight_from_json(const json& j);

json convergence_report_to_json(const ConvergenceReport& r);
json verdict_to_json(const VerdictRecord& v);

// Deterministic CSV: %.17g, "inf" for infinities, "\n" line ends.
class CsvWriter {
  public:
    explicit CsvWriter(std::string header);
    void row(const std::vector<double>& cells);
    void raw_row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    void write_file(const std::string& path) const;

  private:
    std::string text_;
};

std::string format_double(double v);

}  // namespace fasa
