#pragma once

#include <iosfwd>
#include <string>

#include "gridmap.hpp"

namespace mhf {

/// GMAP text format:
///   gmap 1
///   domain_dim D
///   target_dim T
///   shape N1 ... ND
///   periodic b1 ... bD
///   triad FAMILY
///   <one node per line, row-major, T decimal floats>
///
/// Floats are written with %.17g, so write -> read -> write round-trips
/// byte-identically.
GridMap read_gmap(std::istream& in);
GridMap read_gmap_file(const std::string& path);
void write_gmap(const GridMap& m, std::ostream& out);
void write_gmap_file(const GridMap& m, const std::string& path);

} // namespace mhf
