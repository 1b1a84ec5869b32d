#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "triad.hpp"

namespace mhf {

/// Uniform lattice over the unit box [0,1)^m, h = 1/N per axis.
struct GridShape {
    int dims = 0;
    std::array<int, 4> extent{};
    std::array<bool, 4> periodic{true, true, true, true};

    int64_t node_count() const {
        int64_t c = 1;
        for (int a = 0; a < dims; ++a) c *= extent[a];
        return c;
    }
    double spacing(int axis) const { return 1.0 / extent[axis]; }
    bool fully_periodic() const {
        for (int a = 0; a < dims; ++a)
            if (!periodic[a]) return false;
        return true;
    }

    static GridShape cube(int dims, int n);
};

/// Row-major node indexing (first axis slowest) with periodic wrap.
struct GridIndexer {
    explicit GridIndexer(const GridShape& s);
    int dims;
    std::array<int, 4> extent{};
    std::array<int64_t, 4> stride{};
    int64_t count = 0;

    void decode(int64_t node, int* coords) const {
        for (int a = dims - 1; a >= 0; --a) {
            coords[a] = static_cast<int>(node % extent[a]);
            node /= extent[a];
        }
    }
    int64_t encode(const int* coords) const {
        int64_t n = 0;
        for (int a = 0; a < dims; ++a) n = n * extent[a] + coords[a];
        return n;
    }
    /// Node shifted along an axis with periodic wrap.
    int64_t shift(int64_t node, int axis, int delta) const {
        int c[4];
        decode(node, c);
        int v = (c[axis] + delta) % extent[axis];
        if (v < 0) v += extent[axis];
        c[axis] = v;
        return encode(c);
    }
};

/// Sampled map from the periodic unit box into the flat torus R^d/Z^d whose
/// tangent spaces carry `triad`. Values are stored as real lifts, one
/// d-tuple per node, row-major; differencing unwraps to the nearest lift
/// per lattice edge so winding maps are differentiated correctly.
class GridMap {
public:
    GridMap(std::shared_ptr<const Triad> triad, const GridShape& shape);

    const Triad& triad() const { return *triad_; }
    const std::shared_ptr<const Triad>& triad_ptr() const { return triad_; }
    const GridShape& shape() const { return shape_; }
    const GridIndexer& indexer() const { return indexer_; }

    int domain_dim() const { return shape_.dims; }
    int target_dim() const { return triad_->dim(); }
    int64_t nodes() const { return indexer_.count; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double* node_values(int64_t node) { return values_.data() + node * target_dim(); }
    const double* node_values(int64_t node) const {
        return values_.data() + node * target_dim();
    }

    /// Optional integer winding lift per (node, coordinate); when present the
    /// effective lift is values + offsets.
    void set_lift_offsets(std::vector<int32_t> offsets);
    void clear_lift_offsets() { lift_offsets_.reset(); }
    const std::optional<std::vector<int32_t>>& lift_offsets() const { return lift_offsets_; }

    double lift(int64_t node, int coord) const {
        double v = values_[node * target_dim() + coord];
        if (lift_offsets_) v += (*lift_offsets_)[node * target_dim() + coord];
        return v;
    }

    /// Sample a function of the node position x in [0,1)^m.
    template <class Fn>
    void fill(Fn&& fn) {
        const int m = domain_dim();
        const int d = target_dim();
        int c[4];
        double x[4];
        for (int64_t node = 0; node < nodes(); ++node) {
            indexer_.decode(node, c);
            for (int a = 0; a < m; ++a) x[a] = c[a] * shape_.spacing(a);
            fn(x, values_.data() + node * d);
        }
    }

private:
    std::shared_ptr<const Triad> triad_;
    GridShape shape_;
    GridIndexer indexer_;
    std::vector<double> values_;
    std::optional<std::vector<int32_t>> lift_offsets_;
};

/// Torus winding numbers: entry (c, a) is the degree of target coordinate c
/// along the axis-a loop through the origin, read off from per-edge
/// nearest-lift increments.
Eigen::MatrixXi winding_matrix(const GridMap& m);

} // namespace mhf
