#include "sftz/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace sftz {

namespace {

std::string describe(const GridPoint& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "(a=%g, b=%g, c=%g, w=%g)", p.a, p.b, p.c, p.w);
  return buf;
}

struct LineFit {
  double slope = 0, intercept = 0, rms = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit r;
  const std::size_t n = x.size();
  if (n == 0) return r;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  r.slope = sxx > 0 ? sxy / sxx : 0.0;
  r.intercept = my - r.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - r.intercept - r.slope * x[i];
    ss += e * e;
  }
  r.rms = std::sqrt(ss / n);
  return r;
}

std::vector<std::vector<cplx>> test_bank(const WordSpacePtr& space, int random_functions,
                                         std::uint64_t seed) {
  const std::size_t n = space->size();
  std::vector<std::vector<cplx>> bank;
  bank.emplace_back(n, cplx(1.0));
  // Indicators of length-one and length-two cylinders.
  for (int len = 1; len <= std::min(2, space->depth()); ++len) {
    std::map<Word, std::vector<cplx>> by_prefix;
    for (std::size_t i = 0; i < n; ++i) {
      auto& v = by_prefix.try_emplace(space->word(i).prefix(len), n, cplx(0.0)).first->second;
      v[i] = 1.0;
    }
    for (auto& [w, v] : by_prefix) bank.push_back(std::move(v));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int r = 0; r < random_functions; ++r) {
    std::vector<cplx> h(n);
    for (auto& v : h) v = cplx(unif(rng), r % 2 == 0 ? 0.0 : unif(rng));
    bank.push_back(std::move(h));
  }
  return bank;
}

struct PointOperator {
  ComplexTransferMatrix matrix;
  double scale;
};

PointOperator point_operator(const Potential& f0, const Potential& tau, const Potential& g,
                             const GridPoint& p, int depth) {
  auto q = combine(f0, tau, [&](double fv, double tv) { return cplx(fv, -p.b * tv); });
  q = combine(q, g, [&](cplx qv, double gv) { return qv + cplx(p.c, p.w) * gv; });
  return {build_complex_matrix(q, depth), std::max({1.0, std::abs(p.b), std::abs(p.w)})};
}

DecayPoint measure_point(const NormalizedPotential& nf, const NormalizedPotential* verify,
                         const Potential& tau, const Potential& g, const GridPoint& p,
                         const DecayOptions& opt, const SymbolicMetric& metric) {
  const auto op = point_operator(nf.f0, tau, g, p, nf.data.depth());
  const auto& space = op.matrix.space();
  DecayPoint out;
  out.point = p;
  out.norms.assign(opt.m_max, 0.0);
  for (auto h : test_bank(space, opt.random_functions, opt.seed)) {
    const double base = lip_b_norm(ComplexPotential(space, h), op.scale, metric);
    for (int m = 1; m <= opt.m_max; ++m) {
      h = op.matrix.apply(h);
      out.norms[m - 1] =
          std::max(out.norms[m - 1], lip_b_norm(ComplexPotential(space, h), op.scale, metric) / base);
    }
  }
  std::vector<double> xs, ys;
  for (int m = std::max(1, opt.fit_from); m <= opt.m_max; ++m) {
    const double v = out.norms[m - 1];
    if (!(v > 1e-280)) break;
    xs.push_back(m);
    ys.push_back(std::log(v));
  }
  if (xs.size() < 2)
    fail(ErrorCode::invalid_argument, "too few nonzero norms to fit at " + describe(p));
  const auto line = fit_line(xs, ys);
  out.rho = std::exp(line.slope);
  out.C = std::exp(line.intercept);
  out.residual = line.rms;

  out.dense_radius = std::numeric_limits<double>::quiet_NaN();
  if (verify) {
    const auto vop = point_operator(verify->f0, tau, g, p, verify->data.depth());
    if (vop.matrix.dim() <= kDenseLimit) out.dense_radius = spectral_radius(vop.matrix.dense());
  }
  return out;
}

DecayFit summarize(std::vector<DecayPoint> points, bool by_w) {
  DecayFit fit;
  std::vector<double> xs, ys;
  double c_max = 0;
  for (const auto& p : points) {
    fit.rho_sup = std::max(fit.rho_sup, p.rho);
    fit.residual = std::max(fit.residual, p.residual);
    c_max = std::max(c_max, p.C);
    const double size = std::abs(by_w ? p.point.w : p.point.b);
    if (size >= 1.0) {
      xs.push_back(std::log(size));
      ys.push_back(std::log(p.C));
    }
  }
  const bool spread = !xs.empty() && *std::max_element(xs.begin(), xs.end()) >
                                         *std::min_element(xs.begin(), xs.end()) + 1e-12;
  if (spread) {
    const auto line = fit_line(xs, ys);
    fit.eps = line.slope;
    fit.C = std::exp(line.intercept);
  } else {
    fit.C = c_max;
  }
  fit.points = std::move(points);
  return fit;
}

}  // namespace

void validate_regime(const RegimeSpec& regime) {
  if (!(regime.B > 0) || !(regime.nu > 0))
    fail(ErrorCode::invalid_regime, "regime needs B > 0 and nu > 0");
  for (const auto& p : regime.grid) {
    switch (regime.kind) {
      case RegimeKind::b_leading:
        if (std::abs(p.b) < regime.threshold)
          fail(ErrorCode::invalid_regime, describe(p) + " has |b| below b0");
        if (std::abs(p.w) > regime.B * std::pow(std::abs(p.b), regime.nu))
          fail(ErrorCode::invalid_regime, describe(p) + " has |w| > B |b|^nu");
        break;
      case RegimeKind::w_leading:
        if (std::abs(p.w) < regime.threshold)
          fail(ErrorCode::invalid_regime, describe(p) + " has |w| below w0");
        if (std::abs(p.b) > regime.B * std::abs(p.w))
          fail(ErrorCode::invalid_regime, describe(p) + " has |b| > B |w|");
        break;
      case RegimeKind::lattice_control:
        break;
    }
  }
}

double lip_b_norm(const ComplexPotential& h, double scale, const SymbolicMetric& metric) {
  double sup = 0;
  for (const auto& v : h.table()) sup = std::max(sup, std::abs(v));
  return sup + holder_seminorm(h, 1.0, metric) / scale;
}

DecayFit measure_decay(const Potential& f, const Potential& tau, const Potential& g,
                       const RegimeSpec& regime, const DecayOptions& opt) {
  validate_regime(regime);
  if (opt.m_max < opt.fit_from + 1) fail(ErrorCode::invalid_argument, "m_max too small to fit");
  const SymbolicMetric metric(opt.theta);
  const double P = solve_Pf(f, tau);
  std::map<double, NormalizedPotential> work, verify;
  std::vector<DecayPoint> points;
  for (const auto& p : regime.grid) {
    auto it = work.find(p.a);
    if (it == work.end()) it = work.emplace(p.a, normalize(f, tau, P + p.a, opt.depth)).first;
    const NormalizedPotential* vp = nullptr;
    if (opt.verify_depth > 0) {
      auto jt = verify.find(p.a);
      if (jt == verify.end())
        jt = verify.emplace(p.a, normalize(f, tau, P + p.a, opt.verify_depth)).first;
      vp = &jt->second;
    }
    points.push_back(measure_point(it->second, vp, tau, g, p, opt, metric));
  }
  return summarize(std::move(points), regime.kind == RegimeKind::w_leading);
}

RatioCondition ratio_condition_apply(const Potential& g, const Potential& tau, double mu_hat) {
  check_roof(tau);
  if (!(mu_hat > 0)) fail(ErrorCode::invalid_argument, "mu_hat must be positive");
  const auto G = combine(g, tau, [](double gv, double tv) { return gv / tv; });
  const double lo = min_value(G);
  const double L = max_value(G) - lo;
  const double d = std::max(0.0, L / mu_hat - lo);
  return RatioCondition{lo + d, L, mu_hat, d, g + d * tau};
}

DecayFit w_leading_sweep(const Potential& f, const Potential& tau, const Potential& g, double B,
                           const std::vector<double>& w_grid, double b, double mu_hat,
                           const DecayOptions& opt) {
  RegimeSpec regime{RegimeKind::w_leading, B, 1.0, 1.0, {}};
  for (double w : w_grid) regime.grid.push_back({0.0, b, 0.0, w});
  validate_regime(regime);
  const auto rc = ratio_condition_apply(g, tau, mu_hat);
  const SymbolicMetric metric(opt.theta);
  const double P = solve_Pf(f, tau);
  const auto nf = normalize(f, tau, P, opt.depth);
  std::optional<NormalizedPotential> vf;
  if (opt.verify_depth > 0) vf = normalize(f, tau, P, opt.verify_depth);
  std::vector<DecayPoint> points;
  for (double w : w_grid) {
    const auto [b2, w2] = rc.remap(b, w);
    auto pt = measure_point(nf, vf ? &*vf : nullptr, tau, rc.g_shifted, {0.0, b2, 0.0, w2}, opt,
                            metric);
    points.push_back(std::move(pt));
  }
  return summarize(std::move(points), true);
}

ConeReport cone_membership(const Potential& h, double A, const SymbolicMetric& metric,
                           PairScope scope) {
  const auto& space = h.space();
  const auto& spec = h.spec();
  ConeReport r;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!(h[i] > 0))
      fail(ErrorCode::non_positive, "cone function is not positive on " +
                                        space->word(i).to_string(spec.k()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Word& u = space->word(i);
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (i == j) continue;
      const Word& v = space->word(j);
      std::size_t p = 0;
      while (p < u.size() && u[p] == v[p]) ++p;
      if (p == 0 && scope == PairScope::same_rectangle) continue;
      const double D = p == 0 ? 1.0 : cylinder_diameter(spec, metric, u.prefix(p));
      if (!(D > 0)) continue;
      const double ratio = std::abs(h[i] - h[j]) / (h[j] * D);
      if (ratio > r.worst_ratio) {
        r.worst_ratio = ratio;
        r.worst_u = i;
        r.worst_v = j;
      }
    }
  }
  r.member = r.worst_ratio <= A;
  return r;
}

namespace {

double oscillation(const std::vector<double>& h, const WordSpace& space, const SubshiftSpec& spec,
                   const SymbolicMetric& metric) {
  double worst = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Word& u = space.word(i);
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (i == j) continue;
      const Word& v = space.word(j);
      std::size_t p = 0;
      while (p < u.size() && u[p] == v[p]) ++p;
      if (p == 0) continue;
      const double D = cylinder_diameter(spec, metric, u.prefix(p));
      if (!(D > 0)) continue;
      worst = std::max(worst, std::abs(h[i] - h[j]) / (h[j] * D));
    }
  }
  return worst;
}

}  // namespace

LYReport lasota_yorke_check(const Potential& f, const Potential& tau, const Potential& g,
                            const LYOptions& opt) {
  if (opt.depth < 2) fail(ErrorCode::invalid_argument, "Lasota-Yorke check needs depth >= 2");
  if (!(opt.E > 0)) fail(ErrorCode::invalid_argument, "cone constant E must be positive");
  const SymbolicMetric metric(opt.theta);
  LYReport rep;
  rep.depth = opt.depth;
  rep.E = opt.E;
  rep.gamma_hat = opt.gamma_hat > 0 ? opt.gamma_hat : std::pow(opt.theta, -0.5);
  if (!(rep.gamma_hat > 1.0 && rep.gamma_hat <= metric.gamma0()))
    fail(ErrorCode::invalid_argument, "gamma_hat must lie in (1, 1/theta]");

  const double P = solve_Pf(f, tau);
  const auto nf = normalize(f, tau, P + opt.a, opt.depth);
  const auto q = nf.f0 + opt.c * g.lift(std::max(g.depth(), nf.f0.depth()));
  const auto M = build_real_matrix(q, opt.depth);
  const auto raw = f - (P + opt.a) * tau + opt.c * g;
  rep.t = std::max(1.0, holder_seminorm(raw, 1.0, metric));

  const auto& space = M.space();
  const auto& spec = space->spec();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> r(spec.k() + 1);
  for (int s = 1; s <= spec.k(); ++s) r[s] = unif(rng);
  // Stretch to [0, 1] so that symbols always separate.
  const auto [lo, hi] = std::minmax_element(r.begin() + 1, r.end());
  const double r_lo = *lo, r_span = *hi - *lo;
  for (int s = 1; s <= spec.k(); ++s) r[s] = r_span > 0 ? (r[s] - r_lo) / r_span : 0.0;

  auto make_H = [&](double kappa) {
    return Potential::from_function(space, [&](const Word& w) {
      double u = 0, scale = 1;
      for (std::size_t j = 0; j < w.size(); ++j, scale *= opt.theta) u += scale * r[w[j]];
      return std::exp(kappa * u);
    });
  };
  double kappa = opt.E * (1 - opt.theta) / 2;
  auto H = make_H(kappa);
  for (int tries = 0; !cone_membership(H, opt.E, metric).member; ++tries) {
    if (tries > 60) fail(ErrorCode::cone_violation, "no seeded function found in the cone");
    kappa /= 2;
    H = make_H(kappa);
  }

  std::vector<double> h = H.table(), one(space->size(), 1.0);
  std::vector<double> xs, ys;
  for (int m = 1; m <= opt.m_max; ++m) {
    h = M.apply(h);
    one = M.apply(one);
    LYRow row;
    row.m = m;
    row.S = oscillation(h, *space, spec, metric);
    row.S_constant = oscillation(one, *space, spec, metric);
    const double e_term = opt.E / std::pow(rep.gamma_hat, m);
    auto rhs = [&](double A0) { return A0 * (e_term + std::exp(A0 * rep.t) * rep.t); };
    if (row.S > 0) {
      double lo = 0, hi = 1;
      while (rhs(hi) < row.S) hi *= 2;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = (lo + hi) / 2;
        (rhs(mid) < row.S ? lo : hi) = mid;
      }
      row.A0_min = hi;
    }
    rep.A0 = std::max(rep.A0, row.A0_min);
    rep.rows.push_back(row);
  }
  double top = 0;
  for (const auto& row : rep.rows) top = std::max(top, row.S - row.S_constant);
  for (const auto& row : rep.rows) {
    const double diff = row.S - row.S_constant;
    if (diff > 1e-9 * top && diff > 1e-13) {
      xs.push_back(row.m);
      ys.push_back(std::log(diff));
    }
  }
  rep.e_points = static_cast<int>(xs.size());
  if (xs.size() >= 2) rep.e_slope = fit_line(xs, ys).slope;
  return rep;
}

}  // namespace sftz
