#include "cli.hpp"

int main(int argc, char** argv) { return ouhjb::cli::main_entry(argc, argv); }
