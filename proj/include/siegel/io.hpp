#pragma once

#include <string>
#include <vector>

#include "siegel/rational.hpp"

namespace siegel {

// shortest-exact decimal formatting, deterministic across runs
std::string format_double(double v);

// "3", "-1/2", "7/4"
Rat parse_rational(const std::string& s);

std::vector<std::string> split(const std::string& s, char sep);

// write to the path, or to stdout when path is empty or "-"
void write_output(const std::string& path, const std::string& content);

}  // namespace siegel
