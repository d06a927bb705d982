#include <iostream>

#include "agora/cli.hpp"

int main(int argc, char** argv) { return agora::cli::run_app(argc, argv, std::cout, std::cerr); }
