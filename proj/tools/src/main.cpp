#include "smcensus/cli.hpp"

int main(int argc, char** argv) { return smcensus::run(argc, argv); }
