#include "projrip/cli.hpp"

int main(int argc, char** argv) { return projrip::cli::run(argc, argv); }
