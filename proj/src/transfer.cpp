#include "sftz/transfer.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>

namespace sftz {

namespace {

struct EdgeStructure {
  WordSpacePtr edge_space;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

std::shared_ptr<const EdgeStructure> edge_structure(const WordSpacePtr& space) {
  static std::mutex mutex;
  static std::map<const WordSpace*, std::shared_ptr<const EdgeStructure>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(space.get());
  if (it != cache.end()) return it->second;
  auto es = std::make_shared<EdgeStructure>();
  es->edge_space = make_word_space(space->spec(), space->depth() + 1);
  const auto& edges = *es->edge_space;
  es->rows.resize(edges.size());
  es->cols.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto sym = edges.word(e).symbols();
    es->cols[e] = space->index(sym);
    es->rows[e] = space->index(sym.subspan(1));
  }
  cache.emplace(space.get(), es);
  return es;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// BasicTransferMatrix

template <class T>
BasicTransferMatrix<T>::BasicTransferMatrix(WordSpacePtr space, std::vector<T> edge_weights,
                                            bool exact)
    : space_(std::move(space)), weights_(std::move(edge_weights)), exact_(exact) {
  auto es = edge_structure(space_);
  if (weights_.size() != es->edge_space->size())
    fail(ErrorCode::dimension_mismatch, "expected " + std::to_string(es->edge_space->size()) +
                                            " edge weights, got " +
                                            std::to_string(weights_.size()));
  edge_space_ = es->edge_space;
  rows_ = es->rows;
  cols_ = es->cols;
}

template <class T>
std::vector<T> BasicTransferMatrix<T>::apply(const std::vector<T>& h) const {
  if (h.size() != dim())
    fail(ErrorCode::dimension_mismatch, "vector has " + std::to_string(h.size()) +
                                            " entries, matrix dimension is " +
                                            std::to_string(dim()));
  std::vector<T> out(dim(), T{});
  for (std::size_t e = 0; e < weights_.size(); ++e) out[rows_[e]] += weights_[e] * h[cols_[e]];
  return out;
}

template <class T>
std::vector<T> BasicTransferMatrix<T>::apply_adjoint(const std::vector<T>& nu) const {
  if (nu.size() != dim())
    fail(ErrorCode::dimension_mismatch, "vector has " + std::to_string(nu.size()) +
                                            " entries, matrix dimension is " +
                                            std::to_string(dim()));
  std::vector<T> out(dim(), T{});
  for (std::size_t e = 0; e < weights_.size(); ++e) out[cols_[e]] += nu[rows_[e]] * weights_[e];
  return out;
}

template <class T>
Eigen::SparseMatrix<T, Eigen::RowMajor> BasicTransferMatrix<T>::sparse() const {
  std::vector<Eigen::Triplet<T>> trips;
  trips.reserve(weights_.size());
  for (std::size_t e = 0; e < weights_.size(); ++e)
    trips.emplace_back(static_cast<int>(rows_[e]), static_cast<int>(cols_[e]), weights_[e]);
  Eigen::SparseMatrix<T, Eigen::RowMajor> m(static_cast<int>(dim()), static_cast<int>(dim()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> BasicTransferMatrix<T>::dense() const {
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim(), dim());
  for (std::size_t e = 0; e < weights_.size(); ++e) m(rows_[e], cols_[e]) += weights_[e];
  return m;
}

template class BasicTransferMatrix<double>;
template class BasicTransferMatrix<cplx>;

template <class T>
std::vector<T> edge_values(const LocallyConstant<T>& p, int depth, bool* exact) {
  auto space = make_word_space(p.spec(), depth);
  const auto& edges = *edge_structure(space)->edge_space;
  std::vector<T> out(edges.size());
  const bool deep = p.depth() > depth + 1;
  if (exact) *exact = !deep;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Word& w = edges.word(e);
    if (!deep) {
      out[e] = p.eval_symbols(w.symbols());
    } else {
      Point x = w.cyclically_admissible(p.spec())
                    ? Point::periodic(PeriodicWord::make(p.spec(), w))
                    : Point::extending(p.spec(), w);
      out[e] = p.eval(x);
    }
  }
  return out;
}

template std::vector<double> edge_values(const Potential&, int, bool*);
template std::vector<cplx> edge_values(const ComplexPotential&, int, bool*);

int exact_depth(int potential_depth) { return std::max(1, potential_depth - 1); }

TransferMatrix build_real_matrix(const Potential& q, int depth) {
  bool exact = true;
  auto w = edge_values(q, depth, &exact);
  for (auto& v : w) v = std::exp(v);
  return TransferMatrix(make_word_space(q.spec(), depth), std::move(w), exact);
}

ComplexTransferMatrix build_complex_matrix(const ComplexPotential& q, int depth) {
  bool exact = true;
  auto w = edge_values(q, depth, &exact);
  for (auto& v : w) v = std::exp(v);
  return ComplexTransferMatrix(make_word_space(q.spec(), depth), std::move(w), exact);
}

ComplexTransferMatrix build_matrix(const Potential& f, const Potential& tau, const Potential& g,
                                   const ComplexParams& params, int depth) {
  if (depth < 1) fail(ErrorCode::invalid_argument, "depth must be >= 1");
  return build_complex_matrix(complex_potential(f, tau, g, params.s, params.z), depth);
}

void write_triplets(std::ostream& out, const ComplexTransferMatrix& m) {
  out << "row,col,re,im\n";
  char buf[128];
  for (std::size_t e = 0; e < m.edge_count(); ++e) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", m.edge_row(e), m.edge_col(e),
                  m.weight(e).real(), m.weight(e).imag());
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// RPF

double RPFData::log_lambda() const { return std::log(lambda); }

namespace {

constexpr double kPowerTol = 1e-13;
constexpr int kPowerCap = 100000;

// Power iteration on a nonnegative primitive matrix, either side.
bool power_iterate(const TransferMatrix& m, bool adjoint, std::vector<double>& x, double& lambda,
                   double& residual, int& iterations) {
  const std::size_t n = m.dim();
  x.assign(n, 1.0 / static_cast<double>(n));
  auto step = [&](const std::vector<double>& v) { return adjoint ? m.apply_adjoint(v) : m.apply(v); };
  std::vector<double> y = step(x);
  for (iterations = 1; iterations <= kPowerCap; ++iterations) {
    const double sx = std::accumulate(x.begin(), x.end(), 0.0);
    const double sy = std::accumulate(y.begin(), y.end(), 0.0);
    lambda = sy / sx;
    double r = 0;
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(y[i] - lambda * x[i]));
    residual = r / (lambda * max_abs(x));
    for (auto& v : y) v /= sy;
    x.swap(y);
    if (residual < kPowerTol) return true;
    y = step(x);
  }
  return false;
}

void dense_perron(const TransferMatrix& m, bool adjoint, std::vector<double>& x, double& lambda) {
  Eigen::MatrixXd d = m.dense();
  if (adjoint) d.transposeInPlace();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(d, true);
  if (solver.info() != Eigen::Success) fail(ErrorCode::no_convergence, "dense eigensolve failed");
  Eigen::Index best = 0;
  solver.eigenvalues().real().maxCoeff(&best);
  lambda = solver.eigenvalues()[best].real();
  Eigen::VectorXd v = solver.eigenvectors().col(best).real();
  if (v.sum() < 0) v = -v;
  x.assign(v.data(), v.data() + v.size());
  for (double c : x)
    if (c <= 0) fail(ErrorCode::non_primitive, "leading eigenvector is not positive");
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  for (auto& c : x) c /= s;
}

}  // namespace

RPFData rpf(const TransferMatrix& m) {
  RPFData r;
  r.space = m.space();
  r.edge_space = m.edge_space();
  r.exact = m.exact();
  double lam_right = 0, lam_left = 0, res_right = 0, res_left = 0;
  int it_right = 0, it_left = 0;
  const bool ok_right = power_iterate(m, false, r.h, lam_right, res_right, it_right);
  const bool ok_left = power_iterate(m, true, r.nu, lam_left, res_left, it_left);
  if (!ok_right || !ok_left) {
    if (m.dim() > 4096)
      fail(ErrorCode::no_convergence, "power iteration did not reach tolerance in " +
                                          std::to_string(kPowerCap) + " steps");
    if (!ok_right) dense_perron(m, false, r.h, lam_right);
    if (!ok_left) dense_perron(m, true, r.nu, lam_left);
  }
  r.lambda = lam_right;
  r.iterations = std::max(it_right, it_left);

  const double nu_sum = std::accumulate(r.nu.begin(), r.nu.end(), 0.0);
  for (auto& v : r.nu) v /= nu_sum;
  double hn = 0;
  for (std::size_t i = 0; i < r.h.size(); ++i) hn += r.h[i] * r.nu[i];
  for (auto& v : r.h) v /= hn;

  auto mh = m.apply(r.h);
  double res = 0;
  for (std::size_t i = 0; i < mh.size(); ++i) res = std::max(res, std::abs(mh[i] - r.lambda * r.h[i]));
  r.residual = res / (r.lambda * max_abs(r.h));

  r.gibbs.resize(r.h.size());
  for (std::size_t i = 0; i < r.h.size(); ++i) r.gibbs[i] = r.h[i] * r.nu[i];

  r.edge_mass.resize(m.edge_count());
  std::vector<double> by_row(m.dim(), 0.0), by_col(m.dim(), 0.0);
  for (std::size_t e = 0; e < m.edge_count(); ++e) {
    r.edge_mass[e] = r.h[m.edge_col(e)] * m.weight(e) * r.nu[m.edge_row(e)] / r.lambda;
    by_row[m.edge_row(e)] += r.edge_mass[e];
    by_col[m.edge_col(e)] += r.edge_mass[e];
  }
  for (std::size_t i = 0; i < m.dim(); ++i)
    r.invariance_residual = std::max(
        {r.invariance_residual, std::abs(by_row[i] - r.gibbs[i]), std::abs(by_col[i] - r.gibbs[i])});
  return r;
}

RPFData rpf(const Potential& q, int depth) {
  if (depth <= 0) depth = exact_depth(q.depth());
  return rpf(build_real_matrix(q, depth));
}

double pressure(const Potential& q, int depth) { return rpf(q, depth).log_lambda(); }

double equilibrium_integral(const RPFData& data, const Potential& p) {
  if (p.depth() > data.depth() + 1)
    fail(ErrorCode::depth_mismatch, "potential depth " + std::to_string(p.depth()) +
                                        " exceeds eigendata depth + 1 = " +
                                        std::to_string(data.depth() + 1));
  const auto values = p.lift(data.depth() + 1).table();
  double acc = 0;
  for (std::size_t e = 0; e < values.size(); ++e) acc += data.edge_mass[e] * values[e];
  return acc;
}

PressureSequence pressure_via_Zn(const Potential& q, int n_max) {
  if (n_max < 1) fail(ErrorCode::invalid_argument, "n_max must be >= 1");
  PressureSequence out;
  out.pressure = pressure(q);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> logs;
    for (const auto& p : enumerate_periodic_words(q.spec(), n)) logs.push_back(q.cyclic_sum(p));
    const double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0;
    for (double v : logs) acc += std::exp(v - top);
    out.terms.push_back((top + std::log(acc)) / n);
  }
  out.final_gap = out.terms.back() - out.pressure;
  return out;
}

// ---------------------------------------------------------------------------
// Pressure equations

namespace {

// Pr(f - a tau) on a fixed matrix depth, reusing edge tables.
struct PressureLine {
  WordSpacePtr space;
  std::vector<double> f, tau;
  bool exact = true;

  PressureLine(const Potential& fp, const Potential& taup, int depth) {
    space = make_word_space(fp.spec(), depth);
    bool e1 = true, e2 = true;
    f = edge_values(fp, depth, &e1);
    tau = edge_values(taup, depth, &e2);
    exact = e1 && e2;
  }
  TransferMatrix matrix(double a) const {
    std::vector<double> w(f.size());
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(f[e] - a * tau[e]);
    return TransferMatrix(space, std::move(w), exact);
  }
  double operator()(double a) const { return rpf(matrix(a)).log_lambda(); }
};

}  // namespace

PfSolution solve_Pf_detailed(const Potential& f, const Potential& tau, int depth) {
  check_roof(tau);
  if (depth <= 0) depth = exact_depth(std::max(f.depth(), tau.depth()));
  PressureLine pr(f, tau, depth);

  PfSolution sol;
  double lo = 0, hi = 0;
  double plo = pr(0.0), phi = plo;
  if (plo == 0.0) return {0.0, 0.0, 0, 0.0, 0.0};
  double step = 1.0;
  int grow = 0;
  if (plo > 0) {
    hi = step;
    phi = pr(hi);
    while (phi > 0) {
      if (++grow > 60)
        fail(ErrorCode::bracket_failure, "Pr(f - a tau) stays positive on [0, " +
                                             std::to_string(hi) + "]");
      lo = hi;
      plo = phi;
      hi *= 2;
      phi = pr(hi);
    }
  } else {
    phi = plo;
    lo = -step;
    plo = pr(lo);
    while (plo < 0) {
      if (++grow > 60)
        fail(ErrorCode::bracket_failure, "Pr(f - a tau) stays negative on [" +
                                             std::to_string(lo) + ", 0]");
      hi = lo;
      phi = plo;
      lo *= 2;
      plo = pr(lo);
    }
  }
  sol.bracket_lo = lo;
  sol.bracket_hi = hi;

  double x = lo, px = plo;
  for (int it = 1; it <= 200; ++it) {
    sol.iterations = it;
    double cand = lo - plo * (hi - lo) / (phi - plo);
    const double width = hi - lo;
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    px = pr(cand);
    x = cand;
    if (std::abs(px) < 1e-12 || width < 1e-15 * (1.0 + std::abs(x))) break;
    if (px > 0) {
      lo = cand;
      plo = px;
    } else {
      hi = cand;
      phi = px;
    }
    // Secant steps that fail to halve the bracket are followed by a bisection.
    if (hi - lo > 0.5 * width) {
      const double mid = 0.5 * (lo + hi);
      const double pm = pr(mid);
      if (pm > 0) {
        lo = mid;
        plo = pm;
      } else {
        hi = mid;
        phi = pm;
      }
    }
  }
  if (std::abs(px) >= 1e-12 && hi - lo >= 1e-15 * (1.0 + std::abs(x)))
    fail(ErrorCode::no_convergence, "P_f root finder did not converge");
  sol.P = x;
  sol.residual = px;
  return sol;
}

double solve_Pf(const Potential& f, const Potential& tau, int depth) {
  return solve_Pf_detailed(f, tau, depth).P;
}

NormalizedPotential normalize(const Potential& f, const Potential& tau, double P, int depth) {
  if (depth <= 0) depth = exact_depth(std::max(f.depth(), tau.depth()));
  const auto m = build_real_matrix(f - P * tau, depth);
  NormalizedPotential out{Potential::constant(f.spec(), 0.0), P, 0.0, rpf(m), 0.0};
  out.log_lambda = out.data.log_lambda();
  std::vector<double> table(m.edge_count());
  for (std::size_t e = 0; e < table.size(); ++e)
    table[e] = std::log(m.weight(e)) + std::log(out.data.h[m.edge_col(e)]) -
               std::log(out.data.h[m.edge_row(e)]) - out.log_lambda;
  out.f0 = Potential(m.edge_space(), std::move(table));
  std::vector<double> rows(m.dim(), 0.0);
  for (std::size_t e = 0; e < m.edge_count(); ++e) rows[m.edge_row(e)] += std::exp(out.f0[e]);
  for (double r : rows) out.row_sum_residual = std::max(out.row_sum_residual, std::abs(r - 1.0));
  return out;
}

// ---------------------------------------------------------------------------
// Complex continuation

namespace {

struct Spectrum {
  double separation = std::numeric_limits<double>::quiet_NaN();
  double second_modulus = std::numeric_limits<double>::quiet_NaN();
  double radius = std::numeric_limits<double>::quiet_NaN();
};

Spectrum spectrum_around(const ComplexTransferMatrix& m, cplx lambda) {
  Spectrum s;
  if (m.dim() > kDenseLimit) return s;
  auto values = dense_eigenvalues(Eigen::MatrixXcd(m.dense()));
  std::size_t closest = 0;
  for (std::size_t j = 1; j < values.size(); ++j)
    if (std::abs(values[j] - lambda) < std::abs(values[closest] - lambda)) closest = j;
  s.radius = std::abs(values.front());
  s.separation = std::numeric_limits<double>::infinity();
  s.second_modulus = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j == closest) continue;
    s.separation = std::min(s.separation, std::abs(values[j] - lambda));
    s.second_modulus = std::max(s.second_modulus, std::abs(values[j]));
  }
  return s;
}

Eigen::VectorXcd to_complex(const std::vector<double>& v) {
  Eigen::VectorXcd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

SparseComplex weighted(const ComplexTransferMatrix& m, const std::vector<cplx>& factor) {
  return m.map_weights([&](cplx w, std::size_t e) { return w * factor[e]; }).sparse();
}

constexpr double kCollision = 1e-8;

}  // namespace

SzSolution solve_s_of_z(const Potential& f, const Potential& tau, const Potential& g, cplx z,
                        int depth, std::optional<double> P_f) {
  check_roof(tau);
  if (depth <= 0) depth = exact_depth(std::max({f.depth(), tau.depth(), g.depth()}));
  const double P = P_f ? *P_f : solve_Pf(f, tau, depth);
  auto space = make_word_space(f.spec(), depth);
  bool e1, e2, e3;
  const auto fe = edge_values(f, depth, &e1);
  const auto te = edge_values(tau, depth, &e2);
  const auto ge = edge_values(g, depth, &e3);
  const bool exact = e1 && e2 && e3;
  std::vector<cplx> tau_c(te.begin(), te.end()), g_c(ge.begin(), ge.end());
  for (auto& v : tau_c) v = -v;

  auto matrix = [&](cplx s, cplx zz) {
    std::vector<cplx> w(fe.size());
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(fe[e] - s * te[e] + zz * ge[e]);
    return ComplexTransferMatrix(space, std::move(w), exact);
  };

  // Seed at z = 0 from the real eigendata.
  std::vector<double> fr(fe.size());
  for (std::size_t e = 0; e < fr.size(); ++e) fr[e] = std::exp(fe[e] - P * te[e]);
  const RPFData seed = rpf(TransferMatrix(space, fr, exact));
  Eigenpair pair;
  pair.value = seed.lambda;
  pair.right = to_complex(seed.h);
  pair.left = to_complex(seed.nu);

  SzSolution sol;
  cplx s = P;
  const int steps = std::max(4, static_cast<int>(std::ceil(std::abs(z) / 0.05)));
  cplx z_prev = 0;
  for (int k = 1; k <= steps; ++k) {
    const cplx zk = z * (static_cast<double>(k) / steps);
    // Predictor: ds/dz = -lambda_z / lambda_s at the previous point.
    {
      const auto m = matrix(s, z_prev);
      const auto sp = m.sparse();
      const cplx ls = eigenvalue_derivative(pair, weighted(m, tau_c));
      const cplx lz = eigenvalue_derivative(pair, weighted(m, g_c));
      s += -(lz / ls) * (zk - z_prev);
    }
    // Corrector: Newton on lambda(s, zk) = 1.
    bool done = false;
    for (int it = 0; it < 50 && !done; ++it) {
      const auto m = matrix(s, zk);
      pair = refine_eigenpair(m.sparse(), pair.value, pair.right, pair.left);
      const cplx ls = eigenvalue_derivative(pair, weighted(m, tau_c));
      const cplx ds = (pair.value - 1.0) / ls;
      s -= ds;
      if (std::abs(pair.value - 1.0) < 1e-14 || std::abs(ds) < 1e-15 * (1.0 + std::abs(s)))
        done = true;
      pair.value = 1.0;
    }
    if (!done) fail(ErrorCode::no_convergence, "s(z) corrector did not converge");
    z_prev = zk;
    ++sol.steps;
  }
  const auto m = matrix(s, z);
  pair = refine_eigenpair(m.sparse(), 1.0, pair.right, pair.left);
  sol.s = s;
  sol.eigenvalue = pair.value;
  sol.separation = spectrum_around(m, pair.value).separation;
  if (sol.separation < kCollision)
    fail(ErrorCode::eigenvalue_collision, "leading eigenvalue within " +
                                              std::to_string(sol.separation) + " of another");
  return sol;
}

ComplexEigenData leading_eigendata_complex(const ComplexPotential& q, int depth,
                                           const RPFData& seed) {
  if (seed.depth() != depth)
    fail(ErrorCode::depth_mismatch, "seed eigendata has depth " + std::to_string(seed.depth()));
  auto space = make_word_space(q.spec(), depth);
  bool exact = true;
  const auto qe = edge_values(q, depth, &exact);
  std::vector<cplx> im_part(qe.size());
  double top = 0;
  for (std::size_t e = 0; e < qe.size(); ++e) {
    im_part[e] = cplx(0.0, qe[e].imag());
    top = std::max(top, std::abs(qe[e].imag()));
  }
  auto matrix = [&](double t) {
    std::vector<cplx> w(qe.size());
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(cplx(qe[e].real(), t * qe[e].imag()));
    return ComplexTransferMatrix(space, std::move(w), exact);
  };

  Eigenpair pair;
  pair.value = seed.lambda;
  pair.right = to_complex(seed.h);
  pair.left = to_complex(seed.nu);
  ComplexEigenData out;

  double t = 0;
  double dt = 1.0 / std::max(16.0, std::ceil(8.0 * top));
  while (t < 1.0) {
    const double step = std::min(dt, 1.0 - t);
    const auto m_now = matrix(t);
    const cplx slope = eigenvalue_derivative(pair, weighted(m_now, im_part));
    const cplx predicted = pair.value + step * slope;
    const auto m_next = matrix(t + step);
    Eigenpair next = refine_eigenpair(m_next.sparse(), predicted, pair.right, pair.left);
    const double drift = std::abs(next.value - predicted);
    if (drift > 0.25 * std::abs(step * slope) + 1e-9 * std::max(1.0, std::abs(pair.value))) {
      dt = step / 2;
      if (dt < 1e-7)
        fail(ErrorCode::eigenvalue_collision, "continuation step collapsed at t = " +
                                                  std::to_string(t));
      continue;
    }
    pair = std::move(next);
    t += step;
    ++out.steps;
    dt = std::min(dt * 1.5, 0.1);
  }
  const auto m = matrix(1.0);
  pair = refine_eigenpair(m.sparse(), pair.value, pair.right, pair.left);
  out.lambda = pair.value;
  out.vector = pair.right;
  out.modulus = std::abs(pair.value);
  out.phase = std::arg(pair.value);
  const auto spec = spectrum_around(m, pair.value);
  out.second_modulus = spec.second_modulus;
  out.dense_radius = spec.radius;
  out.gap = out.modulus - out.second_modulus;
  if (spec.separation < kCollision)
    fail(ErrorCode::eigenvalue_collision, "continued eigenvalue collides with another");
  return out;
}

ComplexEigenData leading_eigendata_complex(const ComplexPotential& q, int depth) {
  if (depth <= 0) depth = exact_depth(q.depth());
  const Potential re = q.map([](cplx v) { return v.real(); });
  return leading_eigendata_complex(q, depth, rpf(re, depth));
}

}  // namespace sftz
