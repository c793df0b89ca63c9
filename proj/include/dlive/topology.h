#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlive/arith.h"

namespace dlive {

enum class TopoProperty { Open, Closed, Bounded, Compact };
enum class TopoStatus { Holds, Unknown };

const char* property_text(TopoProperty p);

struct TopoVerdict {
  TopoProperty property = TopoProperty::Closed;
  TopoStatus status = TopoStatus::Unknown;
  /// For Bounded/Compact: a proved bound on the sum of squares of vars.
  std::optional<Rational> witness;
  std::string reason;

  bool holds() const { return status == TopoStatus::Holds; }
};

/// Sufficient syntactic criteria over `vars`; parameters are fixed symbols,
/// so atoms without state variables count as both open and closed.
TopoVerdict check_closed(const Formula& f, const std::vector<std::string>& vars);
TopoVerdict check_open(const Formula& f, const std::vector<std::string>& vars);

/// Doubling search for B in {1, 2, 4, ..., 2^32} with f -> sum x_i^2 <= B Valid.
TopoVerdict check_bounded(const Formula& f, const std::vector<std::string>& vars,
                          const Budget& per_query = {4000, 1.0});
TopoVerdict check_compact(const Formula& f, const std::vector<std::string>& vars,
                          const Budget& per_query = {4000, 1.0});

}  // namespace dlive
