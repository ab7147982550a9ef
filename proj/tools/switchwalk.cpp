#include <iostream>

#include "switchwalk/cli.hpp"

int main(int argc, char** argv) {
    return switchwalk::cli::run(argc, argv, std::cout, std::cerr);
}
