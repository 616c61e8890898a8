#pragma once

#include <string>

namespace mbrlab {

// Write via a temp file in the same directory, then rename. Either the
// complete file appears or nothing does.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

// Shortest-width formatting with 17 significant digits (round-trip exact).
std::string fmt17(double v);

} // namespace mbrlab
