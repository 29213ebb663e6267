#include "mixpose/cli.hpp"

int main(int argc, char** argv) { return mixpose::cli_main(argc, argv); }
