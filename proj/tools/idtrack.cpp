#include "cli.hpp"

int main(int argc, char** argv) { return idtrack::cli::run(argc, argv); }
