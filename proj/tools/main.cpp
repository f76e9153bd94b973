#include "cli.hpp"

int main(int argc, char** argv) { return wlsapprox::cli::run(argc, argv); }
