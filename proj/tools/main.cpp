#include <iostream>

#include "prophet/cli.hpp"

int main(int argc, char** argv) { return prophet::run_cli(argc, argv, std::cerr); }
