#include "climbprint/cli.hpp"

int main(int argc, char** argv) { return climbprint::run_cli(argc, argv); }
