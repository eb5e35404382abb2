#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace abel {

// Exit codes: 0 success, 1 malformed JSON, 2 domain error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abel
