// Small CSV helpers: shortest round-trip formatting and checked file output.
#pragma once

#include <fstream>
#include <string>

namespace ch::harness {

// Format with up to 17 significant digits (enough to round-trip a double).
std::string num17(double x);

// Open for writing, throwing io_error on failure.  Always LF line endings.
std::ofstream open_csv(const std::string& path);

}  // namespace ch::harness
