#include <iostream>

#include "kljn/commands.hpp"

int main(int argc, char** argv) {
    return kljn::cli::run(argc, argv, std::cout, std::cerr);
}
