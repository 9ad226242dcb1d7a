#include "maxdep/cli.hpp"

int main(int argc, char** argv) { return maxdep::cli::run(argc, argv); }
