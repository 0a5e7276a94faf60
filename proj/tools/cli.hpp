#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tsnsim {

/// Exit codes: 0 ok, 1 configuration or usage error, 2 scenario error
/// (PTP retries exhausted), 3 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsnsim
