#include "triwave/cli.hpp"

int main(int argc, char** argv) { return triwave::dispatch(argc, argv); }
