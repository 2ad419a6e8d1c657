#include "fgraph/cli.hpp"

int main(int argc, char** argv) { return fgraph::cli::run(argc, argv); }
