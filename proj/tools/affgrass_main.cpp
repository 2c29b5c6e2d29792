#include "affgrass/cli.hpp"

int main(int argc, char** argv) { return affgrass::cli::run(argc, argv); }
