#include "sftz/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sftz {

namespace {

int moebius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

}  // namespace

std::uint64_t primitive_count(const SubshiftSpec& spec, int n) {
  std::int64_t acc = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = moebius(n / d);
    if (mu != 0) acc += mu * static_cast<std::int64_t>(trace_of_power(spec, d));
  }
  return static_cast<std::uint64_t>(acc / n);
}

OrbitCatalog build_catalog(const Potential& tau, const Potential& f, const Potential& g,
                           const Potential& f_u, double T, std::size_t budget) {
  check_roof(tau);
  const auto& spec = tau.spec();
  const int k = spec.k();
  const double tau_min = min_value(tau);
  const double tau_max = max_value(tau);
  OrbitCatalog cat;
  cat.horizon = T;
  cat.n_cap = static_cast<std::size_t>(std::floor(T / tau_min + 1e-12));

  // Lower bound of tau at a position from its first symbol alone.
  std::vector<double> lb(k + 1, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const Symbol s = tau.space()->word(i)[0];
    lb[s] = std::min(lb[s], tau[i]);
  }

  for (std::size_t n = 1; n <= cat.n_cap; ++n) {
    // Lyndon words of length n (Fredricksen-Kessler-Maiorana), pruned by admissibility
    // and by the roof bound.
    std::vector<Symbol> a(n + 1, 1);
    std::size_t found = 0;
    auto gen = [&](auto&& self, std::size_t t, std::size_t p, double partial) -> void {
      if (t > n) {
        if (p != n || !spec.allowed(a[n], a[1])) return;
        Word w(std::vector<Symbol>(a.begin() + 1, a.end()));
        auto rep = PeriodicWord::make(spec, std::move(w));
        const double lam = tau.cyclic_sum(rep);
        if (lam > T) return;
        if (cat.records.size() >= budget)
          fail(ErrorCode::enumeration_budget_exceeded,
               "more than " + std::to_string(budget) + " orbits below T; n_cap = " +
                   std::to_string(cat.n_cap));
        cat.records.push_back({rep, n, lam, f.cyclic_sum(rep), g.cyclic_sum(rep),
                               -f_u.cyclic_sum(rep)});
        ++found;
        return;
      }
      for (Symbol j = a[t - p]; j <= k; ++j) {
        if (t > 1 && !spec.allowed(a[t - 1], j)) continue;
        const double next = partial + lb[j];
        if (next + static_cast<double>(n - t) * tau_min > T * (1 + 1e-12)) continue;
        a[t] = j;
        self(self, t + 1, j == a[t - p] ? p : t, next);
      }
    };
    a[0] = 1;
    gen(gen, 1, 1, 0.0);

    if (static_cast<double>(n) * tau_max <= T) {
      if (found != primitive_count(spec, static_cast<int>(n)))
        throw std::logic_error("orbit catalog incomplete at length " + std::to_string(n));
      cat.verified_lengths.push_back(n);
    }
  }
  std::sort(cat.records.begin(), cat.records.end(), [](const auto& x, const auto& y) {
    if (x.lam != y.lam) return x.lam < y.lam;
    return x.rep < y.rep;
  });
  return cat;
}

void write_catalog_csv(std::ostream& out, const OrbitCatalog& catalog, int k) {
  out << "word,n,lambda,lamF,lamG,lamU\n";
  char buf[256];
  for (const auto& r : catalog.records) {
    std::snprintf(buf, sizeof buf, ",%zu,%.17g,%.17g,%.17g,%.17g\n", r.n, r.lam, r.lamF, r.lamG,
                  r.lamU);
    out << r.rep.word().to_string(k) << buf;
  }
}

double li(double x) {
  if (!(x >= 2.0)) fail(ErrorCode::domain_error, "li needs x >= 2, got " + std::to_string(x));
  if (x == 2.0) return 0.0;
  // Substituting y = e^u keeps the integrand smooth on long ranges.
  auto integrand = [](double u) { return std::exp(u) / u; };
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, std::log(2.0), std::log(x), 20, 1e-14, &err);
}

PiFResult pi_F(const OrbitCatalog& catalog, double Pr_F, double T) {
  if (T > catalog.horizon * (1 + 1e-12))
    fail(ErrorCode::horizon_too_small, "catalog horizon " + std::to_string(catalog.horizon) +
                                           " is below T = " + std::to_string(T));
  PiFResult r;
  for (const auto& rec : catalog.records) {
    if (rec.lam > T) break;
    r.value += std::exp(rec.lamF);
    ++r.orbits;
  }
  if (r.orbits < 10)
    fail(ErrorCode::horizon_too_small, "only " + std::to_string(r.orbits) + " orbits below T");
  r.li_target = li(std::exp(Pr_F * T));
  r.ratio = r.value / r.li_target;
  return r;
}

double pi_F_increment(const OrbitCatalog& catalog, double T0, double T1) {
  double acc = 0;
  for (const auto& rec : catalog.records)
    if (rec.lam > T0 && rec.lam <= T1) acc += std::exp(rec.lamF);
  return acc;
}

LatticeReport lattice_test(const Potential& f, const Potential& tau, int n_max, double tol) {
  check_roof(tau);
  std::vector<double> periods;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& c : primitive_classes(tau.spec(), n)) periods.push_back(tau.cyclic_sum(c.rep));
  const double top = *std::max_element(periods.begin(), periods.end());
  const double eps = tol * top;
  double c = periods.front();
  for (double v : periods) {
    double a = std::max(c, v), b = std::min(c, v);
    while (b > eps) {
      double r = std::fmod(a, b);
      if (b - r < eps) r = 0;
      a = b;
      b = r;
    }
    c = a;
  }
  LatticeReport out;
  if (c < 1e-6 * top) return out;
  for (double v : periods)
    if (std::abs(v / c - std::round(v / c)) > 1e-6) return out;
  out.generator = c;
  const double P = solve_Pf(f, tau);
  const auto f0 = normalize(f, tau, P);
  const double b = 2.0 * std::numbers::pi / c;
  const auto q = combine(f0.f0, tau, [b](double fv, double tv) { return cplx(fv, -b * tv); });
  const auto e = leading_eigendata_complex(q, f0.data.depth());
  // The continued branch can come back to a different eigenvalue once the twist has
  // wound around, so the dense radius decides when it is available.
  out.modulus = std::isfinite(e.dense_radius) ? e.dense_radius : e.modulus;
  out.lattice = std::abs(out.modulus - 1.0) < 1e-8;
  return out;
}

double DeltaSchedule::operator()(double T) const {
  switch (kind) {
    case WindowSchedule::constant: return scale;
    case WindowSchedule::inverse_sqrt: return scale / std::sqrt(T);
    case WindowSchedule::inverse: return scale / T;
    case WindowSchedule::exponential: return scale * std::exp(-rate * T);
  }
  return scale;
}

WindowResult hannay_ozorio_window(const OrbitCatalog& catalog, double T, double delta,
                                  double target) {
  if (!(delta > 0)) fail(ErrorCode::invalid_argument, "window width must be positive");
  WindowResult r;
  r.lo = T - delta / 2;
  r.hi = T + delta / 2;
  r.target = target;
  if (r.hi > catalog.horizon * (1 + 1e-12))
    fail(ErrorCode::horizon_too_small, "window reaches past the catalog horizon");
  double acc = 0;
  for (const auto& rec : catalog.records) {
    if (rec.lam > r.hi) break;
    if (rec.lam < r.lo) continue;
    acc += rec.lamG * std::exp(-rec.lamU);
    ++r.orbits;
  }
  if (r.orbits == 0)
    fail(ErrorCode::empty_window, "no orbit with period in [" + std::to_string(r.lo) + ", " +
                                      std::to_string(r.hi) + "]");
  r.value = acc / delta;
  r.error = target != 0 ? std::abs(r.value - target) / std::abs(target) : std::abs(r.value);
  return r;
}

double hannay_ozorio_target(const Potential& f, const Potential& tau, const Potential& g) {
  const double P = solve_Pf(f, tau);
  const auto data = rpf(f - P * tau);
  return equilibrium_integral(data, g) / equilibrium_integral(data, tau);
}

std::vector<PsiSample> psi_functions(const OrbitCatalog& catalog, double Pr_F,
                                     const std::vector<double>& xs) {
  if (!(Pr_F > 0)) fail(ErrorCode::invalid_argument, "Pr_F must be positive");
  const double x_max = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
  if (std::log(x_max) / Pr_F > catalog.horizon * (1 + 1e-12))
    fail(ErrorCode::horizon_too_small, "catalog horizon must reach log(x)/Pr_F = " +
                                           std::to_string(std::log(x_max) / Pr_F));
  struct Jump {
    double at, literal, conventional;
  };
  std::vector<Jump> jumps;
  const double cut = std::log(std::max(x_max, 1.0));
  for (const auto& rec : catalog.records) {
    for (int m = 1; m * Pr_F * rec.lam <= cut * (1 + 1e-15); ++m)
      jumps.push_back({std::exp(m * Pr_F * rec.lam), rec.lam * std::exp(Pr_F * rec.lam),
                       Pr_F * rec.lam * std::exp(m * rec.lamF)});
  }
  std::sort(jumps.begin(), jumps.end(), [](const Jump& x, const Jump& y) { return x.at < y.at; });

  std::vector<PsiSample> out;
  for (double x : xs) {
    PsiSample s;
    s.x = x;
    for (const auto& j : jumps) {
      if (j.at > x) break;
      s.psi_literal += j.literal;
      s.psi1_literal += j.literal * (x - j.at);
      s.psi_conventional += j.conventional;
      s.psi1_conventional += j.conventional * (x - j.at);
    }
    s.ratio_conventional = s.psi1_conventional / (x * x / 2);
    out.push_back(s);
  }
  return out;
}

}  // namespace sftz
