#include "statcut/reports.hpp"

#include <json.hpp>

namespace statcut {

std::string to_json(const CertificateReport& r, const ConstraintSet& set, int indent) {
  using nlohmann::json;
  json constraints = json::array();
  for (Index k = 0; k < set.size(); ++k) {
    const Constraint& c = set[k];
    const auto& h = r.achieved[static_cast<std::size_t>(k)];
    constraints.push_back({{"name", c.name},
                           {"kind", to_string(c.kind)},
                           {"lower", c.lower},
                           {"upper", c.upper},
                           {"lambda", r.lambda(k)},
                           {"slack", r.slack(k)},
                           {"effective_statistic", r.effective_statistics(k)},
                           {"achieved", h ? json(*h) : json(nullptr)},
                           {"satisfied", static_cast<bool>(r.satisfied[static_cast<std::size_t>(k)])}});
  }
  json j = {{"termination", to_string(r.termination)},
            {"terminated", r.terminated},
            {"iterations", r.iterations},
            {"oracle_calls", r.oracle_calls},
            {"energy", r.energy},
            {"dual_value", r.dual_value},
            {"master_value", r.master_value},
            {"gap", r.gap},
            {"guarantee",
             "labeling has the lowest energy among all labelings whose constraint statistics match "
             "effective_statistic (within each constraint's slack range)"},
            {"constraints", constraints},
            {"warnings", r.warnings}};
  return j.dump(indent);
}

}  // namespace statcut
