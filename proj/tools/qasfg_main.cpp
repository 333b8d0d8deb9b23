#include "qasfg/commands.hpp"

int main(int argc, char** argv) { return qasfg::cli::run(argc, argv); }
