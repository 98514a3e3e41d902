#include <string>
#include <vector>

#include "polar/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return polar::cli_dispatch(args);
}
