#include <iostream>

#include "provio/cli.hpp"

int main(int argc, char** argv) { return provio::dispatch(argc, argv, std::cout, std::cerr); }
