#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liecurve/hermitian.hpp"
#include "liecurve/lie_core.hpp"

namespace liecurve {

// g = k (+) p with the usual bracket relations and Killing-form signs.
// Bases are stored as column blocks in the algebra's reference basis.
struct CartanDecomposition {
  Matrix k_basis;
  Matrix p_basis;
};

struct CatalogFacts {
  bool unimodular = false;
  bool nilpotent = false;
  bool semisimple = false;
  int center_dim = 0;
  int center_cap_j_center_dim = 0;  // dim of z intersect J z
};

struct CatalogEntry {
  std::string name;
  std::string description;
  RealBracket bracket;
  std::optional<ComplexStructure> J;
  std::vector<Vector> frame;  // J-adapted frame defining the reference (1,0)-frame
  CatalogFacts facts;
  std::optional<CartanDecomposition> cartan;

  int complex_dim() const { return J ? bracket.dim / 2 : 0; }
  ComplexFrameBracket complexified() const;
};

// Known names: sl2c, h3c, s3m1, s3lambda:<re>[,<im>], abelian:<n>,
// nilpotent_6d_remark_1, nilpotent_6d_remark_2, nilpotent_6d_abelian_j.
CatalogEntry load(const std::string& name);
std::vector<std::string> list();

// Builders used by load(); exposed for tests.
CatalogEntry make_s3lambda(Complex lambda);
CatalogEntry make_abelian(int complex_dim);

// Realification of complex structure constants on the frame convention
// Z_a = (x_a - i J x_a)/sqrt(2): the derived (1,0)-frame reproduces the
// given holomorphic constants exactly.
RealBracket realify_complex_constants(const CTensor3& hol);

// All stored facts recomputed from scratch; throws on mismatch.
void verify_entry(const CatalogEntry& e);

// Deterministic positive-definite Hermitian metric: h = L L^* with unit
// lower-triangular L and log-uniform diagonal in [0.1, 10].
HermitianMetric random_metric(int n, uint64_t seed);
HermitianMetric random_metric(const CatalogEntry& e, uint64_t seed);

// Antisymmetric, not necessarily Jacobi.
RealBracket random_bracket(int dim, uint64_t seed);

// Structure helpers shared with the predicates above.
Matrix center_basis(const RealBracket& b);                  // columns span the center
bool is_nilpotent(const RealBracket& b);                    // lower central series
int subspace_intersection_dim(const Matrix& U, const Matrix& V);

}  // namespace liecurve
