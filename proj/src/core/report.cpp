#include "report.hpp"

#include <cstdlib>
#include <limits>

namespace mhf {

bool KvReport::has(const std::string& key) const {
    for (const auto& [k, v] : items_)
        if (k == key) return true;
    return false;
}

double KvReport::value(const std::string& key) const {
    for (const auto& [k, v] : items_) {
        if (k != key) continue;
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str()) return std::numeric_limits<double>::quiet_NaN();
        return x;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string KvReport::text() const {
    std::string out;
    for (const auto& [k, v] : items_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

} // namespace mhf
