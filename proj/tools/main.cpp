#include "cli.hpp"

int main(int argc, char** argv) { return confmap::cli::run_cli(argc, argv); }
