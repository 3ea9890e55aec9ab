#include "circdiff/cli.hpp"

int main(int argc, char** argv) { return circdiff::cli::dispatch(argc, argv); }
