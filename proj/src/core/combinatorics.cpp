#include "combinatorics.hpp"

#include <bit>
#include <map>
#include <mutex>

#include "errors.hpp"

namespace mhf {

int choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int t = 0; t < k; ++t) r = r * (n - t) / (t + 1);
    return static_cast<int>(r);
}

SubsetTable::SubsetTable(int dim, int k) : dim_(dim), k_(k) {
    if (dim < 0 || dim > 8 || k < 0 || k > dim)
        throw InvalidArgument("subset table out of supported range");
    rank_of_.fill(-1);
    // Generate strictly increasing k-tuples in lexicographic order.
    std::array<int8_t, 8> idx{};
    for (int t = 0; t < k; ++t) idx[t] = static_cast<int8_t>(t);
    const int n = choose(dim, k);
    masks_.reserve(n);
    indices_.reserve(n);
    while (true) {
        uint16_t m = 0;
        for (int t = 0; t < k; ++t) m |= static_cast<uint16_t>(1u << idx[t]);
        rank_of_[m] = static_cast<int16_t>(masks_.size());
        masks_.push_back(m);
        indices_.push_back(idx);
        // next lexicographic tuple
        int t = k - 1;
        while (t >= 0 && idx[t] == dim - k + t) --t;
        if (t < 0) break;
        ++idx[t];
        for (int s = t + 1; s < k; ++s) idx[s] = static_cast<int8_t>(idx[s - 1] + 1);
    }
}

const SubsetTable& SubsetTable::get(int dim, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, SubsetTable> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find({dim, k});
    if (it == cache.end())
        it = cache.emplace(std::make_pair(dim, k), SubsetTable(dim, k)).first;
    return it->second;
}

int crossings(uint16_t left, uint16_t right) {
    int c = 0;
    uint16_t r = right;
    while (r) {
        int b = std::countr_zero(r);
        r &= static_cast<uint16_t>(r - 1);
        c += std::popcount(static_cast<unsigned>(left >> (b + 1)));
    }
    return c;
}

} // namespace mhf
