#include "sbreak/cli.hpp"

int main(int argc, char** argv) { return sbreak::cli::run(argc, argv); }
