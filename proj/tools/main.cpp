#include <iostream>

#include "effsens/cli.hpp"

int main(int argc, char** argv) { return effsens::cli::run(argc, argv, std::cout, std::cerr); }
