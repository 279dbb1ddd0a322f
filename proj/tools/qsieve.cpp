#include "qsieve/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return qsieve::cli::run(argc, argv, std::cout, std::cerr);
}
