// Collect the arguments, read stdin only when some input names it, print the
// outcome's exact bytes, return its status.

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "psimat/cli.hpp"

int main(int argc, char** argv) {
  psimat::cli::Invocation inv;
  for (int i = 1; i < argc; ++i) inv.args.emplace_back(argv[i]);
  if (std::find(inv.args.begin(), inv.args.end(), "-") != inv.args.end()) {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    inv.stdin_text = ss.str();
  }
  const psimat::cli::Outcome res = psimat::cli::run(inv);
  std::cout << res.out;
  std::cerr << res.err;
  return res.status;
}
