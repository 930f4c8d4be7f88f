// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include <iostream>

#include "duplexforge_cli/cli.hpp"

int main(int argc, char** argv) { return duplexforge::cli::run(argc, argv, std::cout, std::cerr); }
