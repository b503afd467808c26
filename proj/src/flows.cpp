#include "liecurve/flows.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "liecurve/errors.hpp"
#include "liecurve/hermitian.hpp"
#include "liecurve/tolerances.hpp"

namespace liecurve {

std::string flow_kind_name(FlowKind k) {
  switch (k) {
    case FlowKind::Hcf: return "hcf";
    case FlowKind::Kx: return "kx";
    case FlowKind::MFlow: return "m";
    case FlowKind::Ric11Flow: return "ric11";
    case FlowKind::BracketFlow: return "bracket";
    case FlowKind::NormalizedBracketFlow: return "normalized-bracket";
  }
  return "?";
}

std::vector<double> pack_hermitian(const CMatrix& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<double> v;
  v.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      v.push_back(h(i, j).real());
      if (j > i) v.push_back(h(i, j).imag());
    }
  return v;
}

CMatrix unpack_hermitian(const std::vector<double>& v, int n) {
  CMatrix h(n, n);
  size_t p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double re = v[p++];
      const double im = j > i ? v[p++] : 0.0;
      h(i, j) = Complex(re, im);
      if (j > i) h(j, i) = Complex(re, -im);
    }
  return h;
}

std::vector<double> pack_symmetric(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v.push_back(g(i, j));
  return v;
}

Matrix unpack_symmetric(const std::vector<double>& v, int n) {
  Matrix g(n, n);
  size_t p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = v[p];
      g(j, i) = v[p];
      ++p;
    }
  return g;
}

CMatrix FlowTrace::hermitian_at(size_t idx) const {
  return unpack_hermitian(samples.at(idx).state, n_complex);
}

Matrix FlowTrace::real_metric_at(size_t idx) const {
  return unpack_symmetric(samples.at(idx).state, n_real);
}

RealBracket FlowTrace::bracket_at(size_t idx) const {
  RealBracket b(n_real);
  b.c.data() = samples.at(idx).state;
  return b;
}

namespace {

using Eigen::VectorXd;

constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kB5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84,  0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct OdeProblem {
  std::function<VectorXd(double, const VectorXd&)> f;
  std::function<bool(const VectorXd&)> valid;   // optional: state admissible
  std::function<void(VectorXd&)> project;       // optional: post-accept projection
  // optional: called after every accepted step with the step size used and k1
  std::function<void(double t0, const VectorXd& y0, double t1, const VectorXd& y1, double h)>
      on_accept;
};

// One Dormand-Prince 5(4) step; returns false when any stage is non-finite.
bool dopri5_step(const OdeProblem& ode, double t, const VectorXd& y, double h, const VectorXd& k1,
                 VectorXd& y5, VectorXd& err, VectorXd& k_last, IntegratorStats& stats) {
  const int m = static_cast<int>(y.size());
  std::array<VectorXd, 7> k;
  k[0] = k1;
  for (int s = 1; s < 7; ++s) {
    VectorXd ys = y;
    for (int q = 0; q < s; ++q)
      if (kA[s][q] != 0.0) ys += (h * kA[s][q]) * k[q];
    if (!ys.allFinite()) return false;
    k[s] = ode.f(t + kC[s] * h, ys);
    ++stats.rhs_evals;
    if (!k[s].allFinite()) return false;
  }
  y5 = y;
  for (int s = 0; s < 7; ++s)
    if (kB5[s] != 0.0) y5 += (h * kB5[s]) * k[s];
  err = VectorXd::Zero(m);
  for (int s = 0; s < 7; ++s) err += (h * (kB5[s] - kB4[s])) * k[s];
  k_last = k[6];  // FSAL
  return y5.allFinite();
}

double error_norm(const VectorXd& err, const VectorXd& y0, const VectorXd& y1, double atol,
                  double rtol) {
  double acc = 0;
  for (int i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / sc;
    acc += e * e;
  }
  return std::sqrt(acc / std::max<int>(1, static_cast<int>(err.size())));
}

struct OdeRun {
  bool stalled = false;
  double t_end = 0.0;
  VectorXd y_end;
};

OdeRun integrate_ode(const OdeProblem& ode, double t0, VectorXd y, double t1,
                     const IntegratorSettings& set, IntegratorStats& stats) {
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  VectorXd k1 = ode.f(t, y);
  ++stats.rhs_evals;
  if (!k1.allFinite()) throw NonFiniteRHS("at t0");

  const double span = std::abs(t1 - t0);
  double h;
  if (set.initial_step > 0) {
    h = set.initial_step;
  } else {
    double sc = 0, fc = 0;
    for (int i = 0; i < y.size(); ++i) {
      const double s = set.atol + set.rtol * std::abs(y[i]);
      sc += (y[i] / s) * (y[i] / s);
      fc += (k1[i] / s) * (k1[i] / s);
    }
    sc = std::sqrt(sc);
    fc = std::sqrt(fc);
    h = (fc > 1e-12) ? 0.01 * sc / fc : span;
    if (h <= 0 || !std::isfinite(h)) h = span;
  }
  h = std::min(h, span);
  if (set.max_step > 0) h = std::min(h, set.max_step);

  VectorXd y5, err, k_last;
  bool final_step = false;
  for (long step = 0; step < set.max_steps; ++step) {
    const double remaining = dir * (t1 - t);
    if (remaining <= 0) break;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    } else {
      final_step = false;
    }
    const double hs = dir * h;
    bool ok = dopri5_step(ode, t, y, hs, k1, y5, err, k_last, stats);
    double en = ok ? error_norm(err, y, y5, set.atol, set.rtol) : 2.0;
    const bool admissible = ok && en <= 1.0 && (!ode.valid || ode.valid(y5));
    if (admissible) {
      const double t_new = final_step ? t1 : t + hs;
      if (ode.on_accept) ode.on_accept(t, y, t_new, y5, hs);
      t = t_new;
      y = y5;
      if (ode.project) {
        ode.project(y);
        k1 = ode.f(t, y);
        ++stats.rhs_evals;
      } else {
        k1 = k_last;
      }
      ++stats.accepted;
      double fac = ok && en > 0 ? 0.9 * std::pow(en, -0.2) : 5.0;
      fac = std::min(5.0, std::max(0.2, fac));
      h = h * fac;
      if (set.max_step > 0) h = std::min(h, set.max_step);
    } else {
      ++stats.rejected;
      double fac = ok ? std::min(0.9, std::max(0.1, 0.9 * std::pow(std::max(en, 1.0001), -0.2)))
                      : 0.5;
      h = h * fac;
      if (h < set.min_step) {
        OdeRun run;
        run.stalled = true;
        run.t_end = t;
        run.y_end = y;
        return run;
      }
    }
  }
  OdeRun run;
  run.stalled = dir * (t1 - t) > 0;  // ran out of steps
  run.t_end = t;
  run.y_end = y;
  return run;
}

// --- flow state contexts ----------------------------------------------------

std::vector<std::string> hermitian_labels(int n) {
  std::vector<std::string> lab;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      lab.push_back("h" + ij + (j > i ? "_re" : ""));
      if (j > i) lab.push_back("h" + ij + "_im");
    }
  return lab;
}

std::vector<std::string> symmetric_labels(int n) {
  std::vector<std::string> lab;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) lab.push_back("g" + std::to_string(i) + std::to_string(j));
  return lab;
}

std::vector<std::string> bracket_labels(int n) {
  std::vector<std::string> lab;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        lab.push_back("c" + std::to_string(i) + std::to_string(j) + std::to_string(k));
  return lab;
}

// Bracket-side monitors of a real metric: |mu|^2 and |M_mu|^2 in a
// G-orthonormal frame.
void metric_monitors(const RealBracket& b, const Matrix& G, FlowSample& s) {
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) {
    s.mu_norm_sq = s.M_norm_sq = s.F = s.r_nu = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const Matrix Lt = Matrix(llt.matrixL()).transpose();
  const RealBracket bf = gl_action(Lt, b);
  s.mu_norm_sq = bf.squaredNorm();
  const Matrix M = m_endomorphism(bf);
  s.M_norm_sq = M.squaredNorm();
  if (s.mu_norm_sq > 0) {
    s.F = s.M_norm_sq / (s.mu_norm_sq * s.mu_norm_sq);
    s.r_nu = 4.0 * s.F;
  }
}

double min_eig_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_eig_symmetric(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<long>(v.size()));
}

std::vector<double> to_std(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

FlowTrace integrate_metric_flow(const FlowProblem& p) {
  const auto& entry = p.algebra;
  const int nr = entry.bracket.dim;
  FlowTrace trace;
  trace.kind = p.kind;
  trace.n_real = nr;
  trace.t_max_requested = p.t_max;
  trace.stats = {};

  // The M-flow evolves the real metric; the Hermitian flows evolve h.
  const bool hermitian_state = p.kind != FlowKind::MFlow;
  if (p.kind == FlowKind::BracketFlow || p.kind == FlowKind::NormalizedBracketFlow)
    throw ConfigError("integrate_metric_flow called with a bracket flow kind");
  if (hermitian_state && !entry.J)
    throw ConfigError(flow_kind_name(p.kind) + " flow needs a complex structure");

  ComplexFrameBracket cb;
  if (entry.J) cb = entry.complexified();
  const int n = entry.J ? cb.n : 0;
  trace.n_complex = hermitian_state ? n : 0;

  std::array<double, 4> x = p.x;
  if (p.kind == FlowKind::Hcf) x = kXHcf;

  // Initial state.
  VectorXd y0;
  if (hermitian_state) {
    CMatrix h0 = p.h0 ? *p.h0 : CMatrix::Identity(n, n);
    HermitianMetric check(h0);  // validates
    y0 = to_eigen(pack_hermitian(check.h));
    trace.state_labels = hermitian_labels(n);
  } else {
    Matrix G0;
    if (p.g0)
      G0 = *p.g0;
    else if (p.h0 && entry.J)
      G0 = real_form_of_hermitian(*p.h0, *entry.J, entry.frame);
    else
      G0 = Matrix::Identity(nr, nr);
    Eigen::LLT<Matrix> llt(G0);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("initial metric");
    y0 = to_eigen(pack_symmetric(G0));
    trace.state_labels = symmetric_labels(nr);
  }

  auto tensor_rhs = [&](const VectorXd& y) -> VectorXd {
    try {
      if (hermitian_state) {
        const CMatrix h = unpack_hermitian(to_std(y), n);
        switch (p.kind) {
          case FlowKind::Hcf:
          case FlowKind::Kx: {
            const UnitaryFrameData u = unitary_frame(cb, HermitianMetric(h));
            const CMatrix Kref = u.to_reference(k_x(u, x));
            return -to_eigen(pack_hermitian(Kref));
          }
          case FlowKind::Ric11Flow: {
            const Matrix G = real_form_of_hermitian(h, *entry.J, entry.frame);
            const RicciReport rr = ricci_decomposition(entry.bracket, *entry.J, G);
            const CMatrix R = hermitian_of_real_form(rr.Ric11, *entry.J, entry.frame);
            return -to_eigen(pack_hermitian(R));
          }
          default: break;
        }
      } else {
        const Matrix G = unpack_symmetric(to_std(y), nr);
        return -to_eigen(pack_symmetric(m_tensor(entry.bracket, G)));
      }
    } catch (const Error&) {
    }
    return VectorXd::Constant(y.size(), std::numeric_limits<double>::quiet_NaN());
  };

  OdeProblem ode;
  ode.f = [&](double, const VectorXd& y) { return tensor_rhs(y); };
  ode.valid = [&](const VectorXd& y) {
    if (hermitian_state) {
      const CMatrix h = unpack_hermitian(to_std(y), n);
      const double lo = min_eig_hermitian(h);
      return lo > kDegenerateEig * std::max(1.0, h.cwiseAbs().maxCoeff());
    }
    const Matrix g = unpack_symmetric(to_std(y), nr);
    return min_eig_symmetric(g) > kDegenerateEig * std::max(1.0, g.cwiseAbs().maxCoeff());
  };

  auto make_sample = [&](double t, const VectorXd& y) {
    FlowSample s;
    s.t = t;
    s.state = to_std(y);
    if (hermitian_state) {
      const CMatrix h = unpack_hermitian(s.state, n);
      s.min_eig = min_eig_hermitian(h);
      const Matrix G = real_form_of_hermitian(h, *entry.J, entry.frame);
      metric_monitors(entry.bracket, G, s);
    } else {
      const Matrix G = unpack_symmetric(s.state, nr);
      s.min_eig = min_eig_symmetric(G);
      metric_monitors(entry.bracket, G, s);
    }
    s.fix_residual = std::numeric_limits<double>::quiet_NaN();
    return s;
  };

  trace.samples.push_back(make_sample(0.0, y0));
  ode.on_accept = [&](double, const VectorXd&, double t1, const VectorXd& y1, double) {
    trace.samples.push_back(make_sample(t1, y1));
  };

  const OdeRun run = integrate_ode(ode, 0.0, y0, p.t_max, p.integrator, trace.stats);
  trace.integrator_stalled = run.stalled;
  trace.termination = detect_termination(trace, p.tol_fix, p.dwell);
  return trace;
}

namespace {

FlowTrace integrate_bracket_like(const FlowProblem& p, bool normalized) {
  const auto& entry = p.algebra;
  const int nr = entry.bracket.dim;
  FlowTrace trace;
  trace.kind = normalized ? FlowKind::NormalizedBracketFlow : FlowKind::BracketFlow;
  trace.n_real = nr;
  trace.n_complex = 0;
  trace.t_max_requested = p.t_max;
  trace.state_labels = bracket_labels(nr);

  // Background metric: the initial metric's orthonormal frame, so that the
  // flowed bracket matches mu_t = A_t . mu_0 with identity background.
  RealBracket mu0 = entry.bracket;
  Matrix G0;
  if (p.g0)
    G0 = *p.g0;
  else if (p.h0 && entry.J)
    G0 = real_form_of_hermitian(*p.h0, *entry.J, entry.frame);
  else
    G0 = Matrix::Identity(nr, nr);
  {
    Eigen::LLT<Matrix> llt(G0);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("initial metric");
    const Matrix Lt = Matrix(llt.matrixL()).transpose();
    mu0 = gl_action(Lt, mu0);
  }
  if (normalized) {
    const double nrm = mu0.norm();
    if (nrm == 0.0) throw ZeroBracket("normalized bracket flow");
    Eigen::Map<VectorXd>(mu0.c.data().data(), static_cast<long>(mu0.c.data().size())) /= nrm;
  }

  auto bracket_of = [&](const VectorXd& y) {
    RealBracket b(nr);
    b.c.data() = to_std(y);
    return b;
  };

  OdeProblem ode;
  ode.f = [&](double, const VectorXd& y) -> VectorXd {
    RealBracket b = bracket_of(y);
    Matrix E = m_endomorphism(b);
    if (normalized) {
      const double r_nu = 4.0 * E.squaredNorm();
      E += r_nu * Matrix::Identity(nr, nr);
    }
    const RealBracket db = pi_action(E, b);
    VectorXd out = -to_eigen(db.c.data());
    return out;
  };
  if (normalized) {
    ode.project = [&](VectorXd& y) {
      const double nrm = y.norm();
      if (nrm > 0) y /= nrm;  // vector 2-norm == full-sum bracket norm
    };
  }

  auto make_sample = [&](double t, const VectorXd& y) {
    FlowSample s;
    s.t = t;
    s.state = to_std(y);
    RealBracket b = bracket_of(y);
    s.mu_norm_sq = b.squaredNorm();
    const Matrix M = m_endomorphism(b);
    s.M_norm_sq = M.squaredNorm();
    if (s.mu_norm_sq > 0) {
      s.F = s.M_norm_sq / (s.mu_norm_sq * s.mu_norm_sq);
      s.r_nu = 4.0 * s.F;
    }
    s.min_eig = std::numeric_limits<double>::quiet_NaN();
    if (normalized) {
      const Matrix E = M + 4.0 * M.squaredNorm() * Matrix::Identity(nr, nr);
      s.fix_residual = pi_action(E, b).norm();
    } else {
      s.fix_residual = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
  };

  VectorXd y0 = to_eigen(mu0.c.data());
  trace.samples.push_back(make_sample(0.0, y0));

  // Convergence dwell bookkeeping (normalized flow only).
  int dwell_count =
      (normalized && trace.samples.back().fix_residual <= p.tol_fix) ? 1 : 0;
  bool converged = false;

  ode.on_accept = [&](double t0, const VectorXd& ya, double t1, const VectorXd& y1, double h) {
    FlowSample s = make_sample(t1, y1);
    if (trace.kind == FlowKind::BracketFlow) {
      // Norm-law record: finite difference of |mu|^2 vs the Simpson average
      // of -8 |M_mu|^2 over the step (midpoint from a half-step).
      IntegratorStats scratch;
      VectorXd ymid, err, klast;
      const VectorXd k1 = ode.f(t0, ya);
      if (dopri5_step(ode, t0, ya, 0.5 * h, k1, ymid, err, klast, scratch)) {
        NormLawRecord rec;
        rec.t0 = t0;
        rec.t1 = t1;
        const double m0 = trace.samples.back().M_norm_sq;
        const double m1 = s.M_norm_sq;
        RealBracket bm = bracket_of(ymid);
        const double mm = m_endomorphism(bm).squaredNorm();
        rec.fd = (s.mu_norm_sq - trace.samples.back().mu_norm_sq) / h;
        rec.rhs = -8.0 * (m0 + 4.0 * mm + m1) / 6.0;
        trace.norm_law.push_back(rec);
      }
    }
    trace.samples.push_back(s);
    if (normalized) {
      if (s.fix_residual <= p.tol_fix)
        ++dwell_count;
      else
        dwell_count = 0;
      if (dwell_count >= p.dwell) converged = true;
    }
  };

  // Integrate in chunks so the dwell-based convergence can stop early.
  IntegratorSettings set = p.integrator;
  double t = 0.0;
  VectorXd y = y0;
  bool stalled = false;
  const double chunk = normalized ? std::max(p.t_max / 256.0, 1e-3) : p.t_max;
  while (t < p.t_max && !converged) {
    const double t_next = std::min(p.t_max, t + chunk);
    OdeRun run = integrate_ode(ode, t, y, t_next, set, trace.stats);
    t = run.t_end;
    y = run.y_end;
    if (run.stalled) {
      stalled = true;
      break;
    }
    if (!normalized) break;  // single chunk for the plain bracket flow
  }
  trace.integrator_stalled = stalled;
  trace.termination = detect_termination(trace, p.tol_fix, p.dwell);
  return trace;
}

}  // namespace

FlowTrace integrate_bracket_flow(const FlowProblem& p) {
  if (p.kind != FlowKind::BracketFlow)
    throw ConfigError("integrate_bracket_flow expects kind = BracketFlow with P = M");
  return integrate_bracket_like(p, false);
}

FlowTrace integrate_normalized_bracket_flow(const FlowProblem& p) {
  if (p.kind != FlowKind::NormalizedBracketFlow)
    throw ConfigError("integrate_normalized_bracket_flow expects kind = NormalizedBracketFlow");
  return integrate_bracket_like(p, true);
}

FlowTrace integrate_flow(const FlowProblem& p) {
  switch (p.kind) {
    case FlowKind::BracketFlow: return integrate_bracket_flow(p);
    case FlowKind::NormalizedBracketFlow: return integrate_normalized_bracket_flow(p);
    default: return integrate_metric_flow(p);
  }
}

TerminationRecord detect_termination(const FlowTrace& trace, double tol_fix, int dwell) {
  TerminationRecord rec;
  if (trace.samples.empty()) {
    rec.kind = TerminationRecord::Kind::Horizon;
    rec.message = "empty trace";
    return rec;
  }
  const FlowSample& last = trace.samples.back();
  rec.t_end = last.t;
  rec.fixed_point_residual = last.fix_residual;

  if (trace.kind == FlowKind::NormalizedBracketFlow && !trace.integrator_stalled) {
    int run = 0;
    for (auto it = trace.samples.rbegin(); it != trace.samples.rend(); ++it) {
      if (std::isfinite(it->fix_residual) && it->fix_residual <= tol_fix)
        ++run;
      else
        break;
    }
    if (run >= dwell) {
      rec.kind = TerminationRecord::Kind::Converged;
      rec.message = "fixed-point residual below tolerance";
      return rec;
    }
  }

  if (!trace.integrator_stalled) {
    rec.kind = TerminationRecord::Kind::Horizon;
    return rec;
  }

  rec.kind = TerminationRecord::Kind::Singularity;
  // Power-law fit of the min eigenvalue over the last accepted steps:
  // lambda ~ c (T-t)^p gives 1/(d log lambda / dt) = (t - T)/p, linear in t.
  std::vector<double> ts, zs;
  const size_t m = trace.samples.size();
  const size_t lo = m > 21 ? m - 21 : 0;
  for (size_t i = lo; i + 1 < m; ++i) {
    const auto& s0 = trace.samples[i];
    const auto& s1 = trace.samples[i + 1];
    if (!(s0.min_eig > 0) || !(s1.min_eig > 0)) continue;
    const double dt = s1.t - s0.t;
    if (dt <= 0) continue;
    const double dlog = (std::log(s1.min_eig) - std::log(s0.min_eig)) / dt;
    if (dlog >= 0 || !std::isfinite(dlog)) continue;
    ts.push_back(0.5 * (s0.t + s1.t));
    zs.push_back(1.0 / dlog);
  }
  if (ts.size() >= 3) {
    const size_t N = ts.size();
    double sx = 0, sz = 0, sxx = 0, sxz = 0;
    for (size_t i = 0; i < N; ++i) {
      sx += ts[i];
      sz += zs[i];
      sxx += ts[i] * ts[i];
      sxz += ts[i] * zs[i];
    }
    const double det = N * sxx - sx * sx;
    if (std::abs(det) > 1e-300) {
      const double beta = (N * sxz - sx * sz) / det;
      const double alpha = (sz - beta * sx) / N;
      if (beta > 0) {
        rec.T_est = -alpha / beta;
        double ss = 0;
        for (size_t i = 0; i < N; ++i) {
          const double pred = alpha + beta * ts[i];
          ss += (zs[i] - pred) * (zs[i] - pred);
        }
        const double sigma = std::sqrt(ss / std::max<size_t>(1, N - 2));
        rec.T_err = 2.0 * sigma / beta + (rec.T_est - last.t > 0 ? 0.0 : 0.0);
        rec.message = "blow-up fit over " + std::to_string(N) + " steps";
        return rec;
      }
    }
  }
  // Fall back to the step-collapse time.
  rec.T_est = last.t;
  rec.T_err = std::max(1e-6, std::abs(last.t) * 1e-6);
  rec.message = "step-size collapse";
  return rec;
}

}  // namespace liecurve
