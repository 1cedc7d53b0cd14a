#include <iostream>
#include <string>
#include <vector>

#include "levelu/cli.hpp"

int main(int argc, char** argv)
{
    return levelu::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
