#include "sumprod/cli.hpp"

int main(int argc, char** argv) { return sumprod::cli::main_entry(argc, argv); }
