#include "linbandit/cli.hpp"

int main(int argc, char** argv) { return linbandit::run_cli(argc, argv); }
