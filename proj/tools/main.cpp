#include "commands.hpp"

int main(int argc, char** argv) { return eap::cli::run_cli(argc, argv); }
