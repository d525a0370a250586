#include "sklab/cli.hpp"

int main(int argc, char** argv) { return sklab::cli::run(argc, argv); }
