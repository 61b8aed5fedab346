#include <iostream>
#include <string>
#include <vector>

#include "fcgtrack/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return fcgtrack::cli::run(args, std::cout, std::cerr);
}
