#include "jdpew/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace jdpew {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw Error("parse", "not a number: '" + s + "'");
    return v;
}

}  // namespace jdpew
