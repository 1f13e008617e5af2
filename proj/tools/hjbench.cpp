#include "hj/cli.hpp"

int main(int argc, char** argv) { return hj::cli_main(argc, argv); }
