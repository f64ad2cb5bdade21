#include "cqmine/cli.hpp"

int main(int argc, char** argv) { return cqmine::run_cli(argc, argv); }
