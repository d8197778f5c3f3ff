#include <iostream>
#include <string>
#include <vector>

#include "carroll_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return carroll::app::run(args, std::cerr);
}
