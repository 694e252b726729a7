#pragma once

#include <string>
#include <vector>

#include "dlab/scenario.hpp"

namespace dlab::verify {

/// One named verification check. Regular checks pass when measured <= bound;
/// negative controls (expect_large) pass when measured > bound.
struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    bool expect_large = false;
    std::string note;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool all_pass() const;
};

/// Runs one battery: classical, modes, darboux, or coherent.
SuiteReport run_suite(const scenario::Scenario& sc, const std::string& suite);

/// "all" expands to the four batteries in order.
std::vector<SuiteReport> run_suites(const scenario::Scenario& sc,
                                    const std::string& which);

std::string report_text(const std::vector<SuiteReport>& reports);
std::string report_json(const std::vector<SuiteReport>& reports);

}  // namespace dlab::verify
