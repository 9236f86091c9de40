#include "relucert/cli.hpp"

int main(int argc, char** argv) { return relucert::cli::main_entry(argc, argv); }
