#include "eaqga/cli.hpp"

int main(int argc, char** argv) { return eaqga::cli_main(argc, argv); }
