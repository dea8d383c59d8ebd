#pragma once

// Shared building blocks for linear models: a constraint row over a dense
// coefficient vector.

#include <vector>

namespace rankfuse {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearRow {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;
};

}  // namespace rankfuse
