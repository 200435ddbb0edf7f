#include "persig/cli.hpp"

int main(int argc, char** argv) { return persig::cli::run(argc, argv); }
