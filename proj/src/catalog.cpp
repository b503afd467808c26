#include "liecurve/catalog.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "liecurve/errors.hpp"
#include "liecurve/rng.hpp"
#include "liecurve/tolerances.hpp"

namespace liecurve {

ComplexFrameBracket CatalogEntry::complexified() const {
  if (!J) throw NotAdapted("entry '" + name + "' has no complex structure");
  return complexify(bracket, *J, frame);
}

RealBracket realify_complex_constants(const CTensor3& hol) {
  const int n = hol.dim();
  RealBracket b(2 * n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a)
    for (int bb = 0; bb < n; ++bb)
      for (int d = 0; d < n; ++d) {
        const Complex c = hol(a, bb, d);
        if (c == Complex(0)) continue;
        const double re = s * c.real(), im = s * c.imag();
        // [v_a, v_b] = (Re c) v_d + (Im c) v_{n+d}, all scaled by 1/sqrt(2)
        b.at(a, bb, d) += re;
        b.at(a, bb, n + d) += im;
        // [v_a, J v_b] = J [v_a, v_b]
        b.at(a, n + bb, n + d) += re;
        b.at(a, n + bb, d) -= im;
        // [J v_a, v_b] = J [v_a, v_b]
        b.at(n + a, bb, n + d) += re;
        b.at(n + a, bb, d) -= im;
        // [J v_a, J v_b] = -[v_a, v_b]
        b.at(n + a, n + bb, d) -= re;
        b.at(n + a, n + bb, n + d) -= im;
      }
  return b;
}

Matrix center_basis(const RealBracket& b) {
  const int n = b.dim;
  // X central iff ad_X = 0: stack ad column maps, kernel by SVD.
  Matrix M = Matrix::Zero(n * n, n);
  for (int i = 0; i < n; ++i) {
    const Matrix ad = b.ad(i);
    for (int r = 0; r < n; ++r)
      for (int cidx = 0; cidx < n; ++cidx) M(r * n + cidx, i) = ad(r, cidx);
  }
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * std::max(smax, 1.0)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

bool is_nilpotent(const RealBracket& b) {
  const int n = b.dim;
  Matrix term = Matrix::Identity(n, n);  // current term of the lower central series
  for (int step = 0; step <= n; ++step) {
    // next term = span of mu(g, term); the series is nested, so a rank that
    // fails to drop means it has stabilized.
    std::vector<Vector> gens;
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < term.cols(); ++c) {
        Vector e = Vector::Zero(n);
        e[i] = 1.0;
        Vector v = b.apply(e, term.col(c));
        if (v.norm() > 1e-12) gens.push_back(v);
      }
    if (gens.empty()) return true;
    Matrix G(n, static_cast<int>(gens.size()));
    for (size_t c = 0; c < gens.size(); ++c) G.col(static_cast<int>(c)) = gens[c];
    Eigen::ColPivHouseholderQR<Matrix> qr(G);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    if (rank == 0) return true;
    if (rank >= term.cols()) return false;
    term = qr.householderQ() * Matrix::Identity(n, rank);
  }
  return false;
}

int subspace_intersection_dim(const Matrix& U, const Matrix& V) {
  if (U.cols() == 0 || V.cols() == 0) return 0;
  Matrix W(U.rows(), U.cols() + V.cols());
  W << U, -V;
  Eigen::ColPivHouseholderQR<Matrix> qr(W);
  qr.setThreshold(1e-10);
  return static_cast<int>(U.cols() + V.cols() - qr.rank());
}

namespace {

CatalogEntry finish_complex_entry(std::string name, std::string description, const CTensor3& hol) {
  CatalogEntry e;
  e.name = std::move(name);
  e.description = std::move(description);
  e.bracket = realify_complex_constants(hol);
  e.J = ComplexStructure::standard(hol.dim());
  e.frame = standard_frame(*e.J);
  return e;
}

void compute_facts(CatalogEntry& e) {
  e.facts.unimodular = is_unimodular(e.bracket).first;
  e.facts.nilpotent = is_nilpotent(e.bracket);
  const Matrix B = killing_form(e.bracket);
  const Eigen::FullPivLU<Matrix> lu(B);
  e.facts.semisimple = std::abs(lu.determinant()) > 1e-8;
  const Matrix z = center_basis(e.bracket);
  e.facts.center_dim = static_cast<int>(z.cols());
  if (e.J && z.cols() > 0)
    e.facts.center_cap_j_center_dim = subspace_intersection_dim(z, e.J->j * z);
  else
    e.facts.center_cap_j_center_dim = 0;
}

CatalogEntry make_sl2c() {
  CTensor3 hol(3);
  hol(0, 1, 2) = 1;
  hol(1, 0, 2) = -1;
  hol(0, 2, 1) = -1;
  hol(2, 0, 1) = 1;
  hol(1, 2, 0) = 1;
  hol(2, 1, 0) = -1;
  CatalogEntry e = finish_complex_entry(
      "sl2c", "sl(2,C) as a complex Lie group; bi-invariant J; semisimple", hol);
  CartanDecomposition cd;
  cd.k_basis = Matrix::Zero(6, 3);
  cd.p_basis = Matrix::Zero(6, 3);
  for (int a = 0; a < 3; ++a) {
    cd.k_basis(a, a) = 1.0;      // compact real form su(2)
    cd.p_basis(3 + a, a) = 1.0;  // i su(2)
  }
  e.cartan = cd;
  compute_facts(e);
  return e;
}

CatalogEntry make_h3c() {
  CTensor3 hol(3);
  hol(0, 1, 2) = 1;
  hol(1, 0, 2) = -1;
  CatalogEntry e = finish_complex_entry(
      "h3c", "complex Heisenberg group H3(C); 2-step nilpotent", hol);
  compute_facts(e);
  return e;
}

// Structure equations in the de^k(x,y) = -e^k([x,y]) convention.
void add_de(RealBracket& b, int i, int j, int k, double coeff) {
  // de^k += coeff e^i ^ e^j  means [e_i, e_j] has -coeff along e_k
  b.at(i, j, k) += -coeff;
  b.at(j, i, k) += coeff;
}

CatalogEntry make_nilpotent_remark(int which) {
  RealBracket b(6);
  if (which == 1) {
    add_de(b, 0, 1, 2, 1.0);  // de3 = e12
    add_de(b, 0, 2, 3, 1.0);  // de4 = e13
    add_de(b, 1, 2, 4, 1.0);  // de5 = e23
    add_de(b, 0, 3, 5, 1.0);  // de6 = e14 + e25
    add_de(b, 1, 4, 5, 1.0);
  } else {
    add_de(b, 0, 2, 3, 1.0);  // de4 = e13
    add_de(b, 1, 2, 4, 1.0);  // de5 = e23
    add_de(b, 0, 3, 5, 1.0);  // de6 = e14 + e25
    add_de(b, 1, 4, 5, 1.0);
  }
  CatalogEntry e;
  e.name = "nilpotent_6d_remark_" + std::to_string(which);
  e.description = "6-d nilpotent algebra whose center meets J-center trivially";
  e.bracket = b;
  // J e1 = e2, J e3 = e6, J e4 = e5
  Matrix j = Matrix::Zero(6, 6);
  auto set_pair = [&](int a, int bcol) {
    j(bcol, a) = 1.0;
    j(a, bcol) = -1.0;
  };
  set_pair(0, 1);
  set_pair(2, 5);
  set_pair(3, 4);
  e.J = ComplexStructure(j);
  e.frame = {Vector::Unit(6, 0), Vector::Unit(6, 2), Vector::Unit(6, 3)};
  compute_facts(e);
  return e;
}

CatalogEntry make_nilpotent_abelian_j() {
  RealBracket b(6);
  add_de(b, 0, 2, 4, 1.0);   // de5 = e13 - e24
  add_de(b, 1, 3, 4, -1.0);
  add_de(b, 0, 3, 5, 1.0);   // de6 = e14 + e23
  add_de(b, 1, 2, 5, 1.0);
  CatalogEntry e;
  e.name = "nilpotent_6d_abelian_j";
  e.description = "2-step nilpotent algebra with abelian J; every diagonal metric balanced";
  e.bracket = b;
  // J e1 = -e2, J e3 = e4, J e5 = e6
  Matrix j = Matrix::Zero(6, 6);
  j(1, 0) = -1.0;
  j(0, 1) = 1.0;
  j(3, 2) = 1.0;
  j(2, 3) = -1.0;
  j(5, 4) = 1.0;
  j(4, 5) = -1.0;
  e.J = ComplexStructure(j);
  e.frame = {Vector::Unit(6, 0), Vector::Unit(6, 2), Vector::Unit(6, 4)};
  compute_facts(e);
  return e;
}

}  // namespace

CatalogEntry make_s3lambda(Complex lambda) {
  if (std::abs(lambda) == 0.0 || std::abs(lambda) > 1.0 + 1e-12)
    throw ConfigError("s3lambda requires 0 < |lambda| <= 1");
  CTensor3 hol(3);
  hol(0, 1, 1) = 1;
  hol(1, 0, 1) = -1;
  hol(0, 2, 2) = lambda;
  hol(2, 0, 2) = -lambda;
  std::ostringstream name;
  name << "s3lambda:" << lambda.real();
  if (lambda.imag() != 0) name << "," << lambda.imag();
  CatalogEntry e = finish_complex_entry(
      name.str(), "3-d solvable complex Lie group S_{3,lambda}", hol);
  compute_facts(e);
  return e;
}

CatalogEntry make_abelian(int n) {
  if (n < 1) throw ConfigError("abelian:<n> needs n >= 1");
  CatalogEntry e;
  e.name = "abelian:" + std::to_string(n);
  e.description = "abelian algebra, complex dimension " + std::to_string(n);
  e.bracket = RealBracket::zero(2 * n);
  e.J = ComplexStructure::standard(n);
  e.frame = standard_frame(*e.J);
  compute_facts(e);
  return e;
}

std::vector<std::string> list() {
  return {"sl2c",
          "h3c",
          "s3m1",
          "s3lambda:<re>[,<im>]",
          "abelian:<n>",
          "nilpotent_6d_remark_1",
          "nilpotent_6d_remark_2",
          "nilpotent_6d_abelian_j"};
}

CatalogEntry load(const std::string& name) {
  CatalogEntry e;
  if (name == "sl2c") {
    e = make_sl2c();
  } else if (name == "h3c") {
    e = make_h3c();
  } else if (name == "s3m1") {
    e = make_s3lambda(Complex(-1, 0));
    e.name = "s3m1";
  } else if (name.rfind("s3lambda:", 0) == 0) {
    const std::string arg = name.substr(9);
    try {
      double re = 0, im = 0;
      const auto comma = arg.find(',');
      if (comma == std::string::npos) {
        re = std::stod(arg);
      } else {
        re = std::stod(arg.substr(0, comma));
        im = std::stod(arg.substr(comma + 1));
      }
      e = make_s3lambda(Complex(re, im));
    } catch (const std::logic_error&) {
      throw UnknownEntry(name);
    }
  } else if (name.rfind("abelian:", 0) == 0) {
    try {
      e = make_abelian(std::stoi(name.substr(8)));
    } catch (const std::logic_error&) {
      throw UnknownEntry(name);
    }
  } else if (name == "nilpotent_6d_remark_1") {
    e = make_nilpotent_remark(1);
  } else if (name == "nilpotent_6d_remark_2") {
    e = make_nilpotent_remark(2);
  } else if (name == "nilpotent_6d_abelian_j") {
    e = make_nilpotent_abelian_j();
  } else {
    throw UnknownEntry(name);
  }
  verify_entry(e);
  return e;
}

void verify_entry(const CatalogEntry& e) {
  const double scale = std::max(1.0, e.bracket.norm());
  if (e.bracket.antisymmetry_residual() > tau_alg() * scale)
    throw ConfigError("catalog entry " + e.name + ": bracket not antisymmetric");
  if (jacobi_residual(e.bracket) > tau_alg() * scale * scale)
    throw ConfigError("catalog entry " + e.name + ": Jacobi identity fails");
  CatalogFacts recomputed;
  {
    CatalogEntry tmp = e;
    compute_facts(tmp);
    recomputed = tmp.facts;
  }
  if (recomputed.unimodular != e.facts.unimodular || recomputed.nilpotent != e.facts.nilpotent ||
      recomputed.semisimple != e.facts.semisimple || recomputed.center_dim != e.facts.center_dim ||
      recomputed.center_cap_j_center_dim != e.facts.center_cap_j_center_dim)
    throw ConfigError("catalog entry " + e.name + ": stored facts disagree with recomputation");
  if (e.J) {
    const auto pred = complex_structure_predicates(e.bracket, *e.J, e.frame);
    if (!pred.integrable)
      throw ConfigError("catalog entry " + e.name + ": J is not integrable");
  }
  if (e.cartan) {
    const Matrix B = killing_form(e.bracket);
    const Matrix& K = e.cartan->k_basis;
    const Matrix& P = e.cartan->p_basis;
    Matrix bk = K.transpose() * B * K;
    Matrix bp = P.transpose() * B * P;
    Matrix cross = K.transpose() * B * P;
    Eigen::SelfAdjointEigenSolver<Matrix> esk(bk), esp(bp);
    if (esk.eigenvalues().maxCoeff() >= -1e-10 || esp.eigenvalues().minCoeff() <= 1e-10 ||
        cross.cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidCartan("catalog entry " + e.name);
    // bracket relations
    auto in_span = [&](const Vector& v, const Matrix& S) {
      Eigen::ColPivHouseholderQR<Matrix> qr(S);
      Vector sol = qr.solve(v);
      return (S * sol - v).norm() <= 1e-9 * std::max(1.0, v.norm());
    };
    for (int a = 0; a < K.cols(); ++a) {
      for (int b2 = 0; b2 < K.cols(); ++b2)
        if (!in_span(e.bracket.apply(K.col(a), K.col(b2)), K)) throw InvalidCartan("[k,k] not in k");
      for (int b2 = 0; b2 < P.cols(); ++b2)
        if (!in_span(e.bracket.apply(K.col(a), P.col(b2)), P)) throw InvalidCartan("[k,p] not in p");
    }
    for (int a = 0; a < P.cols(); ++a)
      for (int b2 = 0; b2 < P.cols(); ++b2)
        if (!in_span(e.bracket.apply(P.col(a), P.col(b2)), K)) throw InvalidCartan("[p,p] not in k");
  }
}

HermitianMetric random_metric(int n, uint64_t seed) {
  Rng rng(seed);
  CMatrix L = CMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) L(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
  CMatrix h = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0;
      for (int k = 0; k < n; ++k) acc += L(i, k) * d[k] * std::conj(L(j, k));
      h(i, j) = acc;
    }
  return HermitianMetric(h);
}

HermitianMetric random_metric(const CatalogEntry& e, uint64_t seed) {
  if (!e.J) throw NotAdapted("entry has no complex structure");
  return random_metric(e.complex_dim(), seed);
}

RealBracket random_bracket(int dim, uint64_t seed) {
  Rng rng(seed);
  RealBracket b(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = 0; k < dim; ++k) b.set(i, j, k, rng.normal());
  return b;
}

}  // namespace liecurve
