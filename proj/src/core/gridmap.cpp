#include "gridmap.hpp"

#include <cmath>

#include "errors.hpp"

namespace mhf {

GridShape GridShape::cube(int dims, int n) {
    GridShape s;
    s.dims = dims;
    for (int a = 0; a < dims; ++a) s.extent[a] = n;
    return s;
}

GridIndexer::GridIndexer(const GridShape& s) : dims(s.dims), extent(s.extent) {
    count = 1;
    for (int a = dims - 1; a >= 0; --a) {
        stride[a] = count;
        count *= extent[a];
    }
}

GridMap::GridMap(std::shared_ptr<const Triad> triad, const GridShape& shape)
    : triad_(std::move(triad)), shape_(shape), indexer_(shape) {
    if (!triad_) throw InvalidArgument("grid map needs a target triad");
    if (shape_.dims < 2 || shape_.dims > 4)
        throw DimensionError("grid domain dimension must be in [2,4]");
    if (shape_.dims != triad_->fold() + 1)
        throw DimensionError("grid domain dimension must equal triad fold + 1");
    for (int a = 0; a < shape_.dims; ++a)
        if (shape_.extent[a] < 3)
            throw DimensionError("grid extent must be at least 3 per axis");
    values_.assign(indexer_.count * triad_->dim(), 0.0);
}

void GridMap::set_lift_offsets(std::vector<int32_t> offsets) {
    if (static_cast<int64_t>(offsets.size()) != nodes() * target_dim())
        throw DimensionError("lift offsets must have one entry per node coordinate");
    lift_offsets_ = std::move(offsets);
}

Eigen::MatrixXi winding_matrix(const GridMap& m) {
    const int d = m.target_dim();
    const int dims = m.domain_dim();
    const GridIndexer& ix = m.indexer();
    Eigen::MatrixXi w = Eigen::MatrixXi::Zero(d, dims);
    for (int a = 0; a < dims; ++a) {
        if (!m.shape().periodic[a]) continue;
        std::vector<double> acc(d, 0.0);
        int coords[4] = {0, 0, 0, 0};
        int64_t node = ix.encode(coords);
        for (int s = 0; s < m.shape().extent[a]; ++s) {
            const int64_t next = ix.shift(node, a, 1);
            for (int c = 0; c < d; ++c) {
                const double delta = m.lift(next, c) - m.lift(node, c);
                acc[c] += delta - std::floor(delta + 0.5);
            }
            node = next;
        }
        for (int c = 0; c < d; ++c) w(c, a) = static_cast<int>(std::lround(acc[c]));
    }
    return w;
}

} // namespace mhf
