#include <weightlab/cli.hpp>

int main(int argc, char** argv) { return weightlab::run_cli(argc, argv); }
