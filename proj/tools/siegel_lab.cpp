#include "siegel/cli_app.hpp"

int main(int argc, char** argv) { return siegel::cli_main(argc, argv); }
