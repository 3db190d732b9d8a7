#include "qhd/cli.hpp"

int main(int argc, char** argv) { return qhd::cli::run(argc, argv); }
