#include "sau/cli.hpp"

int main(int argc, char** argv) { return sau::run_cli(argc, argv); }
