#include <iostream>
#include <string>
#include <vector>

#include "pvi_lab/cli.hpp"

int main(int argc, char **argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto ex = pvi::lab::execute(args);
    std::cerr << ex.messages;
    bool to_file = false;
    for (const auto &a : args) {
        to_file = to_file || a == "--out" || a.rfind("--out=", 0) == 0;
    }
    if (!to_file) {
        std::cout << ex.output;
    }
    return ex.exit_code;
}
