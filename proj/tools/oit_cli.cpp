#include "oit/cli.hpp"

int main(int argc, char** argv) { return oit::cli::run(argc, argv); }
