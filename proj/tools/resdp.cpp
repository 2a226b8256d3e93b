#include "resdp/cli.hpp"

int main(int argc, char** argv) { return resdp::cli::run(argc, argv); }
