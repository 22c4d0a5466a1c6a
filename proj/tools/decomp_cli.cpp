#include "decomp/bench.hpp"

int main(int argc, char** argv) { return decomp::bench::cli_main(argc, argv); }
