#ifndef ROADFIELD_CSV_HPP
#define ROADFIELD_CSV_HPP

#include <cstdio>
#include <string>

namespace roadfield {

/// Shortest round-trippable decimal form: 17 significant digits, '.' decimal
/// separator, C locale.  All CSV output funnels through here so files are
/// byte-identical across runs.
inline std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace roadfield

#endif
