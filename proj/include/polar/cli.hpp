#pragma once

#include <string>
#include <vector>

namespace polar {

// Command-line surface: construct / encode / decode / simulate / qsim.
// `args` excludes the program name. Returns the process exit status.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace polar
