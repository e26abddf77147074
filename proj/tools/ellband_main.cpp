#include "ellband/cli.hpp"

int main(int argc, char** argv) { return ellband::cli::run(argc, argv); }
