#pragma once

#include <string>
#include <vector>

#include "frobstat/arith.hpp"

namespace frobstat {

struct selftest_report {
    std::string module;
    u64 checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// module is one of ffcurve, classnum, families, counting, constants, clt
selftest_report selftest(const std::string& module);
// module exercised by a CLI subcommand
std::string selftest_module_for(const std::string& command);

}  // namespace frobstat
