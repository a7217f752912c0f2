#ifndef STATCUT_REPORTS_HPP
#define STATCUT_REPORTS_HPP

#include <string>

#include "statcut/constraints.hpp"
#include "statcut/dual.hpp"

namespace statcut {

/// Certificate of a maximize_dual run as JSON, constraints named and in order.
std::string to_json(const CertificateReport& report, const ConstraintSet& set, int indent = 2);

}  // namespace statcut

#endif  // STATCUT_REPORTS_HPP
