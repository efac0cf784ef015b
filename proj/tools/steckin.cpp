#include <iostream>

#include "steckin/cli.hpp"

int main(int argc, char** argv) {
  return steckin::cli::run(argc, argv, std::cout, std::cerr);
}
