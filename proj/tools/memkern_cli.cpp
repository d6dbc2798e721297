#include "memkern/cli.hpp"

int main(int argc, char** argv) { return memkern::run_cli(argc, argv); }
