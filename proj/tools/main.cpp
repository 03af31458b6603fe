#include "cli.hpp"

int main(int argc, char** argv) { return frachill::cli::run(argc, argv); }
