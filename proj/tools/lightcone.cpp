#include "run.hpp"

int main(int argc, char** argv) { return lightcone::cli::run(argc, argv); }
