#include <iostream>

#include "fsp/commands.hpp"

int main(int argc, char** argv)
{
  return fsp::run_cli(argc, argv, std::cout, std::cerr);
}
