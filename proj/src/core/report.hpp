#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace mhf {

/// Ordered key=value block, the text form every check and diagnostic emits.
/// Doubles are printed with %.17g so identical runs serialize identically.
class KvReport {
public:
    void add(const std::string& key, double value) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        items_.emplace_back(key, buf);
    }
    void add(const std::string& key, long long value) {
        items_.emplace_back(key, std::to_string(value));
    }
    void add(const std::string& key, int value) {
        items_.emplace_back(key, std::to_string(value));
    }
    void add(const std::string& key, const std::string& value) {
        items_.emplace_back(key, value);
    }
    void add_bool(const std::string& key, bool value) {
        items_.emplace_back(key, value ? "1" : "0");
    }

    bool has(const std::string& key) const;
    /// NaN when the key is absent or non-numeric.
    double value(const std::string& key) const;

    std::string text() const;

    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

} // namespace mhf
