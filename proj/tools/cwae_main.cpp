#include <iostream>

#include "cwae/cli/commands.hpp"

int main(int argc, char** argv) { return cwae::cli::run_cli(argc, argv, std::cout, std::cerr); }
