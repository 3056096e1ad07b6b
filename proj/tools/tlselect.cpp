#include "tlselect/cli.hpp"

int main(int argc, char** argv) { return tlselect::cli::cli_main(argc, argv); }
