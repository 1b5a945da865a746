#include <string>
#include <vector>

#include "duality/cli.hpp"

int main(int argc, char** argv) {
  return duality::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
