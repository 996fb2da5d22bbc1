#include <iostream>

#include "ellalloc/cli/commands.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return ellalloc::cli::run(argc, argv, std::cout, std::cerr);
}
