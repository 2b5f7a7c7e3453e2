#include "specprint/cli.hpp"

int main(int argc, char** argv) { return specprint::cli::run(argc, argv); }
