#ifndef COALSIM_FORMAT_HPP
#define COALSIM_FORMAT_HPP

#include <cstdio>
#include <string>

namespace coalsim {

/// Fixed CSV number formatting: 12 significant digits, locale-free.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace coalsim

#endif  // COALSIM_FORMAT_HPP
