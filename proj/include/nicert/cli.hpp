#pragma once

#include <string>
#include <vector>

namespace nicert::cli {

/// Entry point shared by the binary and the tests.  args excludes the
/// program name.  Returns the process exit code: 0 affirmative verdict,
/// 1 negative verdict, 2 usage or input error.
int run(const std::vector<std::string>& args);

}  // namespace nicert::cli
