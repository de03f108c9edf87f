// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "peal/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return peal::run_cli(args, std::cin, std::cout, std::cerr);
}
