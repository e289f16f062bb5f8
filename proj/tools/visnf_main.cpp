#include <iostream>

#include "visnf/cli_app.hpp"

int main(int argc, char** argv) {
    return visnf::run_cli(argc, argv, std::cout, std::cerr);
}
