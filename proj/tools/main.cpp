#include "f2s/cli/pipeline.hpp"

int main(int argc, char** argv) { return f2s::cli::run_cli(argc, argv); }
