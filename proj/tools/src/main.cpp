#include <iostream>

#include "gevrey_cli/cli.hpp"

int main(int argc, char** argv) { return gevrey::cli::main(argc, argv, std::cout, std::cerr); }
