#pragma once
namespace siegel { int cli_main(int argc, char** argv); }
