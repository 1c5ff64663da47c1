#ifndef SSPD_CLI_HPP
#define SSPD_CLI_HPP

#include <string>
#include <vector>

namespace sspd {

// Exit codes: 0 ok, 1 check failure, 2 parse error, 3 non-agreeable input,
// 4 infeasible instance.
int run_cli(const std::vector<std::string>& args);

} // namespace sspd

#endif
