#include "cli.hpp"

int main(int argc, char** argv) { return nnct::cli::run(argc, argv); }
