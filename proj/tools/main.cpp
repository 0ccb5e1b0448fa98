#include "cli/commands.hpp"

int main(int argc, char** argv) { return lfc::cli::run(argc, argv); }
