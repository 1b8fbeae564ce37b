#include "xcop/cli.hpp"

int main(int argc, char** argv) { return xcop::run_cli(argc, argv); }
