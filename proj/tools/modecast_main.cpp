#include "modecast/cli.hpp"

int main(int argc, char** argv) { return modecast::cli_main(argc, argv); }
