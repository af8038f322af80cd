#include <iostream>

#include "cli/dispatch.hpp"

int main(int argc, char** argv) { return mollified::cli::dispatch(argc, argv, std::cout, std::cerr); }
