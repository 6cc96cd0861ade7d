#include <iostream>

#include "qfmin/cli.hpp"

int main(int argc, char** argv) { return qfmin::cli::run(argc, argv, std::cout, std::cerr); }
