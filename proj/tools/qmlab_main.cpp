#include "qmlab/cli.hpp"

int main(int argc, char** argv) { return qmlab::cli::run(argc, argv); }
