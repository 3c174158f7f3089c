#include "chainvol/cli.hpp"

int main(int argc, char** argv) { return chainvol::cli::run(argc, argv); }
