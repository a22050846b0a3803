#include "stochdiss/cli.hpp"

int main(int argc, char** argv) { return stochdiss::run_cli(argc, argv); }
