#include <iostream>
#include <string>
#include <vector>

#include "acceptance_suite.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  int failed = 0;
  for (const auto& r : hqoc::acceptance::run(ids, std::cout)) failed += !r.pass;
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
