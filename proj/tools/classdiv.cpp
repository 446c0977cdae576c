#include <iostream>

#include "classdiv/cli.hpp"

int main(int argc, char ** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return classdiv::cli::run(args, std::cout, std::cerr);
}
