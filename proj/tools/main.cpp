#include "minangle/cli.hpp"

int main(int argc, char** argv) { return minangle::cli::run_cli(argc, argv); }
