#include "wptlab/cli.hpp"

int main(int argc, char** argv) { return wptlab::run_cli(argc, argv); }
