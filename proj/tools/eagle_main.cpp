#include "eagle/cli.hpp"

int main(int argc, char** argv) { return eagle::run_cli(argc, argv); }
