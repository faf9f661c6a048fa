#include "noetherlab/cli.hpp"

int main(int argc, char** argv) { return nlab::cli::run(argc, argv); }
