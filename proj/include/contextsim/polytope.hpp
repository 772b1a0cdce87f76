#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace contextsim::polytope {

// Exact facet enumeration for tiny 0/±1 vertex polytopes. Everything is
// integer arithmetic: candidate hyperplanes come from d-subsets of the
// vertices, normals from (d-1)x(d-1) integer cofactors, and a candidate is
// kept iff every vertex lies weakly on one side. Brute force over all
// C(n, d) subsets -- fine at desk scale (C(16,4) = 1820), not meant for
// anything bigger than d = 8.

using Coeff = long long;
using Point = std::vector<Coeff>;

struct VertexSet {
  std::size_t dim = 0;
  std::vector<Point> points;  // deduplicated, entries in {-1, +1}
};

// Validates entries, checks 1 <= dim <= 8, drops duplicates (keeping first
// occurrence order).
VertexSet make_vertex_set(std::size_t dim, std::vector<Point> points);

// The 16 deterministic assignments (a, a', b, b') in {-1,+1}^4, and the 8
// distinct product tuples (ab, ab', a'b, a'b') they induce.
VertexSet raw_vertices();
VertexSet product_vertices();

// One inequality coeffs . p <= rhs with integer entries divided by their
// common gcd. The inequality direction is part of the identity.
struct Facet {
  std::vector<Coeff> coeffs;
  Coeff rhs = 0;
};

bool operator==(const Facet& lhs, const Facet& rhs);
bool operator<(const Facet& lhs, const Facet& rhs);  // lexicographic, for stable output

// Thrown when the input points do not affinely span their ambient space;
// carries the affine rank actually found.
class DegenerateVertexSet : public std::invalid_argument {
 public:
  DegenerateVertexSet(std::size_t rank, std::size_t dim);
  std::size_t affine_rank;
};

// All facets of conv(points), sorted lexicographically on (coeffs, rhs).
// Requires the points to affinely span R^dim.
std::vector<Facet> enumerate_facets(const VertexSet& vertices);

// Signed CHSH combination of four correlations. Signs must be +1/-1.
double chsh_sum(const std::array<double, 4>& expectations, const std::array<int, 4>& signs);

// The 8 sign patterns with an odd number of minus signs; these are exactly
// the CHSH facet normals of the product polytope.
const std::array<std::array<int, 4>, 8>& chsh_sign_variants();

// "c1 c2 ... cd <= r"
std::string facet_line(const Facet& facet);
std::string facet_list(const std::vector<Facet>& facets);  // one line per facet

}  // namespace contextsim::polytope
