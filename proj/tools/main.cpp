#include "ecsim/cli.hpp"

int main(int argc, char** argv) { return ecsim::cli_main(argc, argv); }
