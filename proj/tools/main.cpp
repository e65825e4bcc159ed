#include "asymwp_cli.hpp"

int main(int argc, char** argv) { return asymwp::cli::run(argc, argv); }
