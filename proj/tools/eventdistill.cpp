#include "eventdistill/cli.hpp"

int main(int argc, char** argv) { return eventdistill::cli::run(argc, argv); }
