#include <iostream>
#include <string>
#include <vector>

#include "kindmc/cli.h"

int main(int argc, char **argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return kindmc::cli_main(args, std::cout, std::cerr);
}
