#include <vector>

#include "nicert/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nicert::cli::run(args);
}
