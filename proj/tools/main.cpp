#include <string>
#include <vector>

#include "quack/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return quack::cli_main(args);
}
