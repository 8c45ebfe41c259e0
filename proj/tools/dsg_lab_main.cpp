#include <vector>
#include <string>

#include "dsglab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dsglab::run_cli(args);
}
