#include "qcalc/cli.hpp"

int main(int argc, char** argv) { return qcalc::cli::run(argc, argv); }
