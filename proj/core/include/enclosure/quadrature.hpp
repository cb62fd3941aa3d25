#pragma once

#include <vector>

namespace enclosure {

/// Gauss-Legendre nodes and weights on [0, 1].
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Shared read-only rule for the given order; computed once, cached.
const QuadRule& gauss_legendre(int order);

}  // namespace enclosure
