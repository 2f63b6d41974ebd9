#include <string>
#include <vector>

#include "qotsim/scenario.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qotsim::run_cli(args);
}
