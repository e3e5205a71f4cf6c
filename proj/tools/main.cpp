#include "dbesim/cli.hpp"

int main(int argc, char** argv) { return dbesim::cli_main(argc, argv); }
