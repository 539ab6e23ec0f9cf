#include "sftz/potential.hpp"

#include <cmath>
#include <map>

namespace sftz {

double min_value(const Potential& p) {
  return *std::min_element(p.table().begin(), p.table().end());
}

double max_value(const Potential& p) {
  return *std::max_element(p.table().begin(), p.table().end());
}

Potential potential_from_words(const SubshiftSpec& spec, int depth,
                               const std::vector<std::pair<std::string, double>>& entries) {
  auto space = make_word_space(spec, depth);
  std::vector<double> table(space->size(), 0.0);
  std::vector<bool> seen(space->size(), false);
  for (const auto& [text, value] : entries) {
    Word w = Word::parse(text, spec.k());
    if (static_cast<int>(w.size()) != depth)
      fail(ErrorCode::inadmissible_word,
           "'" + text + "' has length " + std::to_string(w.size()) + ", expected " +
               std::to_string(depth));
    auto i = space->find(w.symbols());
    if (!i) fail(ErrorCode::inadmissible_word, "'" + text + "' is not admissible");
    if (seen[*i]) fail(ErrorCode::config_invalid, "'" + text + "' listed twice");
    seen[*i] = true;
    table[*i] = value;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      fail(ErrorCode::missing_word, "no value for '" + space->word(i).to_string(spec.k()) + "'");
  return Potential(space, std::move(table));
}

void check_roof(const Potential& tau) {
  const double lo = min_value(tau);
  if (!(lo > 0.0))
    fail(ErrorCode::non_positive_roof, "roof minimum is " + std::to_string(lo));
}

ComplexPotential complex_potential(const Potential& f, const Potential& tau, const Potential& g,
                                   cplx s, cplx z) {
  auto ft = combine(f, tau, [&](double fv, double tv) { return cplx(fv) - s * tv; });
  return combine(ft, g, [&](cplx v, double gv) { return v + z * gv; });
}

int averaging_length(double t, const SymbolicMetric& metric) {
  if (!(t >= 1.0)) fail(ErrorCode::invalid_argument, "averaging scale must be >= 1");
  const double m = std::ceil(std::log(t) / std::log(1.0 / metric.theta()) - 1e-12);
  return std::max(1, static_cast<int>(m));
}

AveragedPotential average_to_depth(const Potential& p, double t, const SymbolicMetric& metric,
                                   double alpha) {
  AveragedPotential out{p, averaging_length(t, metric), 0.0, 0.0};
  out.certified_bound = holder_seminorm(p, alpha, metric) / std::pow(t, alpha);
  const int m = out.cylinder_length;
  if (p.depth() <= m) return out;

  auto space = make_word_space(p.spec(), m);
  std::vector<double> sum(space->size(), 0.0);
  std::vector<int> count(space->size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto j = space->index(p.space()->word(i).symbols());
    sum[j] += p[i];
    ++count[j];
  }
  for (std::size_t j = 0; j < sum.size(); ++j) sum[j] /= count[j];
  out.potential = Potential(space, std::move(sum));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double avg = out.potential.eval_symbols(p.space()->word(i).symbols());
    out.sup_difference = std::max(out.sup_difference, std::abs(p[i] - avg));
  }
  return out;
}

CohomologyReport cohomology_obstruction(const Potential& p, const Potential& q, int n_max) {
  if (n_max < 1) fail(ErrorCode::invalid_argument, "n_max must be >= 1");
  const Potential diff = p - q;
  CohomologyReport report;
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& cyc : enumerate_periodic_words(p.spec(), n)) {
      if (!cyc.is_canonical()) continue;
      const double dev = std::abs(diff.cyclic_sum(cyc));
      if (!report.witness || dev > report.deviation) {
        report.deviation = dev;
        report.witness = cyc;
        report.period = static_cast<std::size_t>(n);
      }
    }
  }
  return report;
}

}  // namespace sftz
