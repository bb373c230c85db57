#include "topoguard/runner.hpp"

int main(int argc, char** argv) { return topoguard::run_cli(argc, argv); }
