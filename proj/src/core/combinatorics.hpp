#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mhf {

/// Binomial coefficient for the small range used here (n <= 12).
int choose(int n, int k);

/// Index subsets of {0,...,dim-1} of a fixed size, each encoded as a bitmask.
/// Subsets are ordered lexicographically as strictly increasing index tuples,
/// which fixes the coefficient layout of every multivector and form table.
class SubsetTable {
public:
    static const SubsetTable& get(int dim, int k);

    int dim() const { return dim_; }
    int k() const { return k_; }
    int count() const { return static_cast<int>(masks_.size()); }

    uint16_t mask(int rank) const { return masks_[rank]; }
    int rank(uint16_t mask) const { return rank_of_[mask]; }

    /// Elements of the subset at `rank`, ascending.
    const std::array<int8_t, 8>& indices(int rank) const { return indices_[rank]; }

private:
    SubsetTable(int dim, int k);
    int dim_, k_;
    std::vector<uint16_t> masks_;
    std::vector<std::array<int8_t, 8>> indices_;
    std::array<int16_t, 256> rank_of_{};
};

/// Number of pairs (a, b) with a in `left`, b in `right`, a > b.
/// Parity gives the sign of sorting the concatenation (left, right).
int crossings(uint16_t left, uint16_t right);

/// Sign (+1/-1) of merging two disjoint sorted index sets by concatenation.
inline int merge_sign(uint16_t left, uint16_t right) {
    return (crossings(left, right) & 1) ? -1 : 1;
}

} // namespace mhf
