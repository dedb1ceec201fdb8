#include "tractor/cli.hpp"

int main(int argc, char** argv) { return tractor::cli_main(argc, argv); }
