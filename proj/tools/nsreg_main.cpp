#include "nsreg/cli.hpp"

int main(int argc, char** argv) { return nsreg::run_cli(argc, argv); }
