#include <iostream>

#include "eipsynth/cli/cli.hpp"

int main(int argc, char** argv)
{
    return eipsynth::cli::run(std::vector<std::string>(argv, argv + argc), std::cin, std::cout, std::cerr);
}
