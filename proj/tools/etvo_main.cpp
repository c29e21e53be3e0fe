#include "etvo/cli.hpp"

int main(int argc, char** argv) { return etvo::cli::run(argc, argv); }
