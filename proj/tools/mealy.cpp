#include <iostream>

#include "mealy/cli.hpp"

int main(int argc, char** argv) {
  return mealy::run_command({argv + 1, argv + argc}, std::cout, std::cerr);
}
