#include "sspd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return sspd::run_cli(args);
}
