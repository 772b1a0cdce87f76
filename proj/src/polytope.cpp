#include "contextsim/polytope.hpp"

#include "contextsim/urn.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace contextsim::polytope {

namespace {

// Bareiss fraction-free determinant: exact over the integers, every
// division is exact. Entries here are differences of ±1 coordinates, so
// intermediates stay far below the int64 range (Hadamard bound ~1e5 at
// this size).
Coeff determinant(std::vector<std::vector<Coeff>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Coeff prev = 1;
  Coeff sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Rank of an integer matrix by fraction-free elimination with full pivoting.
std::size_t matrix_rank(std::vector<std::vector<Coeff>> m) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  Coeff prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j)
        m[i][j] = (m[i][j] * m[rank][col] - m[i][col] * m[rank][j]) / prev;
      m[i][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

std::size_t affine_rank(const VertexSet& vs) {
  if (vs.points.size() <= 1) return 0;
  std::vector<std::vector<Coeff>> diffs;
  diffs.reserve(vs.points.size() - 1);
  for (std::size_t i = 1; i < vs.points.size(); ++i) {
    std::vector<Coeff> row(vs.dim);
    for (std::size_t j = 0; j < vs.dim; ++j) row[j] = vs.points[i][j] - vs.points[0][j];
    diffs.push_back(std::move(row));
  }
  return matrix_rank(std::move(diffs));
}

// Generalized cross product: the integer normal of the hyperplane through
// the d chosen points, n_j = (-1)^j * det(diff rows with column j removed).
std::vector<Coeff> hyperplane_normal(const std::vector<const Point*>& pts) {
  const std::size_t d = pts[0]->size();
  if (d == 1) return {1};
  std::vector<std::vector<Coeff>> diffs(d - 1, std::vector<Coeff>(d));
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t j = 0; j < d; ++j) diffs[i][j] = (*pts[i + 1])[j] - (*pts[0])[j];

  std::vector<Coeff> normal(d, 0);
  std::vector<std::vector<Coeff>> minor(d - 1, std::vector<Coeff>(d - 1));
  for (std::size_t skip = 0; skip < d; ++skip) {
    for (std::size_t i = 0; i + 1 < d; ++i) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == skip) continue;
        minor[i][c++] = diffs[i][j];
      }
    }
    const Coeff det = determinant(minor);
    normal[skip] = (skip % 2 == 0) ? det : -det;
  }
  return normal;
}

void gcd_normalize(Facet& f) {
  Coeff g = std::abs(f.rhs);
  for (Coeff c : f.coeffs) g = std::gcd(g, std::abs(c));
  if (g > 1) {
    for (Coeff& c : f.coeffs) c /= g;
    f.rhs /= g;
  }
}

}  // namespace

VertexSet make_vertex_set(std::size_t dim, std::vector<Point> points) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("dimension must lie in [1, 8]");
  if (points.empty()) throw std::invalid_argument("vertex set must be non-empty");
  VertexSet vs;
  vs.dim = dim;
  for (auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("point dimension mismatch");
    for (Coeff c : p)
      if (c != 1 && c != -1)
        throw std::invalid_argument("vertex entries must be +1 or -1");
    if (std::find(vs.points.begin(), vs.points.end(), p) == vs.points.end())
      vs.points.push_back(std::move(p));
  }
  return vs;
}

VertexSet raw_vertices() {
  std::vector<Point> pts;
  pts.reserve(16);
  for (const auto& s : urn::assignments())
    pts.push_back(Point{s.a, s.a_prime, s.b, s.b_prime});
  return make_vertex_set(4, std::move(pts));
}

VertexSet product_vertices() {
  std::vector<Point> pts;
  pts.reserve(16);
  for (const auto& s : urn::assignments())
    pts.push_back(Point{Coeff{s.a} * s.b, Coeff{s.a} * s.b_prime, Coeff{s.a_prime} * s.b,
                        Coeff{s.a_prime} * s.b_prime});
  return make_vertex_set(4, std::move(pts));
}

bool operator==(const Facet& lhs, const Facet& rhs) {
  return lhs.coeffs == rhs.coeffs && lhs.rhs == rhs.rhs;
}

bool operator<(const Facet& lhs, const Facet& rhs) {
  if (lhs.coeffs != rhs.coeffs) return lhs.coeffs < rhs.coeffs;
  return lhs.rhs < rhs.rhs;
}

DegenerateVertexSet::DegenerateVertexSet(std::size_t rank, std::size_t dim)
    : std::invalid_argument("vertex set is degenerate: affine rank " +
                            std::to_string(rank) + " < dimension " + std::to_string(dim)),
      affine_rank(rank) {}

std::vector<Facet> enumerate_facets(const VertexSet& vertices) {
  const std::size_t n = vertices.points.size();
  const std::size_t d = vertices.dim;
  const std::size_t rank = affine_rank(vertices);
  if (rank < d) throw DegenerateVertexSet(rank, d);

  std::set<Facet> found;
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;

  std::vector<const Point*> subset(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) subset[i] = &vertices.points[idx[i]];
    std::vector<Coeff> normal = hyperplane_normal(subset);
    bool nonzero = false;
    for (Coeff c : normal) nonzero |= (c != 0);
    if (nonzero) {
      Coeff rhs = 0;
      for (std::size_t j = 0; j < d; ++j) rhs += normal[j] * (*subset[0])[j];
      bool all_le = true, all_ge = true;
      for (const auto& p : vertices.points) {
        Coeff v = 0;
        for (std::size_t j = 0; j < d; ++j) v += normal[j] * p[j];
        all_le &= (v <= rhs);
        all_ge &= (v >= rhs);
      }
      if (all_le || all_ge) {
        Facet f;
        if (all_le) {
          f.coeffs = normal;
          f.rhs = rhs;
        } else {
          f.coeffs.resize(d);
          for (std::size_t j = 0; j < d; ++j) f.coeffs[j] = -normal[j];
          f.rhs = -rhs;
        }
        gcd_normalize(f);
        found.insert(std::move(f));
      }
    }

    // next combination
    std::size_t i = d;
    while (i > 0 && idx[i - 1] == n - d + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t k = i; k < d; ++k) idx[k] = idx[k - 1] + 1;
  }
  return {found.begin(), found.end()};
}

double chsh_sum(const std::array<double, 4>& expectations, const std::array<int, 4>& signs) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (signs[i] != 1 && signs[i] != -1)
      throw std::invalid_argument("CHSH signs must be +1 or -1");
    s += signs[i] * expectations[i];
  }
  return s;
}

const std::array<std::array<int, 4>, 8>& chsh_sign_variants() {
  static const std::array<std::array<int, 4>, 8> variants = [] {
    std::array<std::array<int, 4>, 8> v{};
    std::size_t k = 0;
    for (int mask = 0; mask < 16; ++mask) {
      int minus = 0;
      for (int b = 0; b < 4; ++b) minus += (mask >> b) & 1;
      if (minus % 2 == 0) continue;
      for (int b = 0; b < 4; ++b) v[k][b] = ((mask >> b) & 1) ? -1 : +1;
      ++k;
    }
    return v;
  }();
  return variants;
}

std::string facet_line(const Facet& facet) {
  std::ostringstream out;
  for (std::size_t j = 0; j < facet.coeffs.size(); ++j) {
    if (j) out << ' ';
    out << facet.coeffs[j];
  }
  out << " <= " << facet.rhs;
  return out.str();
}

std::string facet_list(const std::vector<Facet>& facets) {
  std::string out;
  for (const auto& f : facets) {
    out += facet_line(f);
    out += '\n';
  }
  return out;
}

}  // namespace contextsim::polytope
