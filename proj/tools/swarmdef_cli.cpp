#include "swarmdef/harness.hpp"

int main(int argc, char** argv) { return swarmdef::cli_main(argc, argv); }
