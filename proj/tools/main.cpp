#include "kbavg/experiment.hpp"

int main(int argc, char** argv) { return kbavg::run_cli(argc, argv); }
