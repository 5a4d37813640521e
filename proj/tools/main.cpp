#include "commands.hpp"

int main(int argc, char** argv) { return rumor::cli::main_entry(argc, argv); }
