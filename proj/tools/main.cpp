#include <iostream>

#include "frame_iterates/cli.hpp"

int main(int argc, char** argv) { return fi::main_entry(argc, argv, std::cout, std::cerr); }
