#include "harness/csv.hpp"

#include <cstdio>

#include "harness/config.hpp"

namespace ch::harness {

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace ch::harness
