#pragma once

#include <string>
#include <vector>

#include "enclosure/config.hpp"

namespace enclosure {

struct ValidationCheck {
    std::string suite;
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
};

/// Runs the per-module property suites (geometry, cgo, fem, indicator) on the
/// configured setup: finite-difference PDE residuals, scaling laws, energy
/// identities, reciprocity. Oracles here are independent finite-difference
/// routes, not the analytic paths they check.
ValidationReport run_validation(const RunConfig& config);

std::string validation_json(const ValidationReport& report);

}  // namespace enclosure
