#include "ptep/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "ptep/errors.hpp"
#include "ptep/json_io.hpp"
#include "ptep/parallel.hpp"
#include "ptep/spectra.hpp"

namespace ptep::sensing {

namespace {

linalg::ExtComplexMatrix perturbed(const linalg::ExtComplexMatrix& m, const PerturbationSpec& spec,
                                   const linalg::ExtComplexMatrix* direction, double s) {
  linalg::ExtComplexMatrix out = m;
  if (spec.kind == PerturbationSpec::Kind::diagonal_site) {
    out(spec.site - 1, spec.site - 1) += ExtComplex(ExtReal(s));
  } else {
    const ExtComplex scale{ExtReal(s)};
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) out(i, j) += scale * (*direction)(i, j);
    }
  }
  return out;
}

double displacement(const linalg::ExtComplexMatrix& mp, const std::optional<ExtComplex>& gamma,
                    const std::vector<ExtComplex>& base) {
  const auto spec = linalg::eigenvalues(mp);
  ExtReal worst(0);
  if (gamma) {
    for (const auto& z : spec.eigenvalues) worst = std::max(worst, ExtReal(abs(z - *gamma)));
    return to_double(worst);
  }
  std::vector<Complex> prev;
  std::vector<Complex> next;
  for (const auto& z : base) prev.push_back(to_complex(z));
  for (const auto& z : spec.eigenvalues) next.push_back(to_complex(z));
  const auto perm = spectra::match_paths(prev, next);
  for (std::size_t i = 0; i < base.size(); ++i) {
    worst = std::max(worst, ExtReal(abs(spec.eigenvalues[perm[i]] - base[i])));
  }
  return to_double(worst);
}

}  // namespace

PerturbationSpec PerturbationSpec::diagonal(std::size_t site, std::vector<double> sizes) {
  PerturbationSpec p;
  p.kind = Kind::diagonal_site;
  p.site = site;
  p.sizes = std::move(sizes);
  return p;
}

PerturbationSpec PerturbationSpec::full(linalg::ComplexMatrix direction, std::vector<double> sizes) {
  PerturbationSpec p;
  p.kind = Kind::full_matrix;
  p.direction = std::move(direction);
  p.sizes = std::move(sizes);
  return p;
}

std::vector<double> log_grid(double s_min, double s_max, int points) {
  if (!(s_min > 0.0) || !(s_max > s_min) || !std::isfinite(s_max)) {
    throw InvalidInput("need 0 < s_min < s_max");
  }
  if (points < 2) throw InvalidInput("points must be >= 2");
  const double hi = std::log10(s_max);
  const double lo = std::log10(s_min);
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    out.push_back(std::pow(10.0, hi + (lo - hi) * static_cast<double>(k) / static_cast<double>(points - 1)));
  }
  out.front() = s_max;
  out.back() = s_min;
  return out;
}

std::vector<std::string> validate_spec(const PerturbationSpec& spec, std::size_t n) {
  std::vector<std::string> out;
  if (spec.sizes.empty()) out.emplace_back("no perturbation sizes");
  for (std::size_t k = 0; k < spec.sizes.size(); ++k) {
    if (!(spec.sizes[k] > 0.0) || !std::isfinite(spec.sizes[k])) {
      out.emplace_back("perturbation sizes must be positive and finite");
      break;
    }
    if (k > 0 && !(spec.sizes[k] < spec.sizes[k - 1])) {
      out.emplace_back("perturbation sizes must be strictly decreasing");
      break;
    }
  }
  if (out.empty() && spec.sizes.front() < 1e3 * spec.sizes.back()) {
    out.emplace_back("perturbation sizes must span at least three decades");
  }
  if (spec.kind == PerturbationSpec::Kind::diagonal_site) {
    if (spec.site < 1 || spec.site > n) {
      out.push_back("site " + std::to_string(spec.site) + " outside 1.." + std::to_string(n));
    }
  } else if (!spec.direction) {
    out.emplace_back("full-matrix perturbation needs a direction");
  } else if (spec.direction->size() != n) {
    out.emplace_back("direction has the wrong dimension");
  } else {
    double norm_sq = 0.0;
    for (const auto& z : spec.direction->entries()) norm_sq += std::norm(z);
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-8) out.emplace_back("direction must have unit Frobenius norm");
  }
  return out;
}

SplittingFit split(const linalg::ExtComplexMatrix& m, const std::optional<ExtComplex>& gamma,
                   const PerturbationSpec& spec, int threads) {
  auto violations = validate_spec(spec, m.size());
  if (!violations.empty()) throw ValidationError(std::move(violations));

  std::optional<linalg::ExtComplexMatrix> direction;
  if (spec.kind == PerturbationSpec::Kind::full_matrix) direction = linalg::convert<ExtComplex>(*spec.direction);
  std::vector<ExtComplex> base;
  if (!gamma) base = linalg::eigenvalues(m).eigenvalues;

  SplittingFit fit;
  fit.sizes = spec.sizes;
  fit.max_shift.resize(spec.sizes.size());
  parallel_for(spec.sizes.size(), threads, [&](std::size_t k) {
    const auto mp = perturbed(m, spec, direction ? &*direction : nullptr, spec.sizes[k]);
    fit.max_shift[k] = displacement(mp, gamma, base);
  });

  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = 0; k < fit.sizes.size(); ++k) {
    if (!(fit.max_shift[k] >= kShiftFloor)) continue;
    x.push_back(std::log(fit.sizes[k]));
    y.push_back(std::log(fit.max_shift[k]));
  }
  if (x.size() < 4) {
    throw InsufficientData("only " + std::to_string(x.size()) + " shifts above " + std::to_string(kShiftFloor) +
                           "; need at least 4");
  }
  const auto line = fit_line(x, y);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.used_points = x.size();
  return fit;
}

SplittingFit split(const linalg::ComplexMatrix& m, std::optional<double> gamma, const PerturbationSpec& spec,
                   int threads) {
  std::optional<ExtComplex> g;
  if (gamma) g = ExtComplex(ExtReal(*gamma));
  return split(linalg::convert<ExtComplex>(m), g, spec, threads);
}

std::vector<SiteSplitting> site_ranking(const linalg::ExtComplexMatrix& m, const ExtComplex& gamma, int order) {
  if (order < 2 || static_cast<std::size_t>(order) != m.size()) throw InvalidInput("order must equal the matrix size");
  std::vector<SiteSplitting> out;
  const double root = std::pow(kRankingSize, 1.0 / order);
  for (std::size_t site = 1; site <= m.size(); ++site) {
    const auto spec = PerturbationSpec::diagonal(site, {kRankingSize});
    const auto mp = perturbed(m, spec, nullptr, kRankingSize);
    out.push_back({site, displacement(mp, gamma, {}) / root});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SiteSplitting& x, const SiteSplitting& y) { return x.constant > y.constant; });
  return out;
}

std::vector<SiteSplitting> site_ranking(const linalg::ComplexMatrix& m, double gamma, int order) {
  return site_ranking(linalg::convert<ExtComplex>(m), ExtComplex(ExtReal(gamma)), order);
}

void write_csv(std::ostream& os, const SplittingFit& fit, int order) {
  const auto old_flags = os.flags();
  const auto old_precision = os.precision(17);
  os.unsetf(std::ios::floatfield);
  os << "s,max_shift\n";
  for (std::size_t k = 0; k < fit.sizes.size(); ++k) os << fit.sizes[k] << ',' << fit.max_shift[k] << '\n';
  nlohmann::ordered_json summary{
      {"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}, {"order", order}};
  os << "# " << json_io::dump(summary, -1) << '\n';
  os.precision(old_precision);
  os.flags(old_flags);
}

}  // namespace ptep::sensing
