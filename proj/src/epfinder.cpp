#include "ptep/epfinder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ptep/capacitance.hpp"
#include "ptep/errors.hpp"
#include "ptep/parallel.hpp"

namespace ptep::epfinder {

namespace {

constexpr double kPolishHandoff = 1e-6;
constexpr double kExtStepRel = 1e-25;
constexpr double kExtTarget = 1e-40;
constexpr int kPolishIterations = 12;
constexpr int kFallbackIterations = 60;

// a-unknowns sit at odd indices, b-unknowns at even ones.
bool is_a_slot(std::size_t k) { return k % 2 == 1; }

template <class R>
R abs_value(const R& x) {
  using std::abs;
  return abs(x);
}

template <class R>
R norm2(std::span<const R> v) {
  using std::sqrt;
  R s(0);
  for (const auto& x : v) s += x * x;
  return sqrt(s);
}

template <class R>
R max_abs(std::span<const R> v) {
  R m(0);
  for (const auto& x : v) m = std::max(m, abs_value(x));
  return m;
}

template <class C>
struct CoefficientMismatch {
  std::vector<C> diff;  // x^0 .. x^(N-1)
  real_t<C> gamma;
  real_t<C> max_coeff;
};

template <class C>
CoefficientMismatch<C> mismatch(const EpProblem& problem, const model::BasicProfile<real_t<C>>& p,
                                const real_t<C>& gamma) {
  using R = real_t<C>;
  const auto m = capacitance::assemble<C>(problem.mode, p, R(problem.epsilon));
  const auto poly = linalg::char_poly(m);
  const int n = problem.order;

  // (gamma - x)^n, ascending.
  std::vector<R> target(n + 1, R(0));
  target[0] = R(1);
  for (int d = 1; d <= n; ++d) {
    for (int k = d; k >= 0; --k) {
      R next = target[k] * gamma;
      if (k > 0) next -= target[k - 1];
      target[k] = next;
    }
  }
  CoefficientMismatch<C> out{{}, gamma, R(0)};
  for (int k = 0; k < n; ++k) {
    out.diff.push_back(poly.coeffs[k] - C(target[k]));
    out.max_coeff = std::max(out.max_coeff, abs_value(target[k]));
  }
  return out;
}

template <class R>
R trace_gamma(const model::BasicProfile<R>& p) {
  R s(0);
  for (const auto& v : p.a) s += v;
  return s / R(static_cast<int>(p.size()));
}

template <class R>
std::vector<R> residual_t(const EpProblem& problem, std::span<const R> u) {
  using C = std::conditional_t<std::is_same_v<R, double>, Complex, ExtComplex>;
  const auto p = profile_from_unknowns<R>(problem, u);
  const auto mm = mismatch<C>(problem, p, trace_gamma(p));
  std::vector<R> out;
  for (int k = 0; k + 1 < problem.order; ++k) out.push_back(mm.diff[k].real());
  return out;
}

// Gaussian elimination with partial pivoting; false when singular.
template <class R>
bool solve_linear(std::vector<R> a, std::vector<R> rhs, std::vector<R>& x) {
  const std::size_t n = rhs.size();
  R scale(0);
  for (const auto& v : a) scale = std::max(scale, abs_value(v));
  if (scale == R(0)) return false;
  const R tiny = R(64) * machine_epsilon<R>() * scale;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (abs_value(a[i * n + k]) > abs_value(a[piv * n + k])) piv = i;
    }
    if (abs_value(a[piv * n + k]) <= tiny) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const R f = a[i * n + k] / a[k * n + k];
      if (f == R(0)) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      rhs[i] -= f * rhs[k];
    }
  }
  x.assign(n, R(0));
  for (std::size_t k = n; k-- > 0;) {
    R s = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * x[j];
    x[k] = s / a[k * n + k];
  }
  return true;
}

template <class R>
std::vector<R> jacobian(const EpProblem& problem, const std::vector<R>& x, const std::vector<R>& fx,
                        const R& h_rel) {
  const std::size_t n = x.size();
  std::vector<R> j(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<R> xp = x;
    const R h = h_rel * (R(1) + abs_value(x[c]));
    xp[c] += h;
    const auto fp = residual_t<R>(problem, xp);
    for (std::size_t r = 0; r < n; ++r) j[r * n + c] = (fp[r] - fx[r]) / h;
  }
  return j;
}

template <class R>
struct NewtonRun {
  std::vector<R> x;
  R norm;
  int iterations = 0;
  std::string reason;  // empty on convergence
};

template <class R>
NewtonRun<R> damped_newton(const EpProblem& problem, std::vector<R> x, const SolverConfig& cfg, const R& h_rel,
                           const R& tolerance, int max_iterations) {
  auto fx = residual_t<R>(problem, x);
  R nf = norm2<R>(fx);
  NewtonRun<R> run{x, nf, 0, {}};
  for (int it = 0; it < max_iterations; ++it) {
    run.iterations = it;
    if (!is_finite(nf)) {
      run.reason = "non-finite residual";
      return run;
    }
    if (nf < tolerance) {
      run.x = x;
      run.norm = nf;
      return run;
    }
    const auto jac = jacobian<R>(problem, x, fx, h_rel);
    std::vector<R> neg(fx.size());
    for (std::size_t i = 0; i < fx.size(); ++i) neg[i] = -fx[i];
    std::vector<R> dx;
    if (!solve_linear<R>(jac, neg, dx)) {
      run.x = x;
      run.norm = nf;
      run.reason = "singular Jacobian";
      return run;
    }
    if (norm2<R>(dx) <= R(cfg.step_tolerance) * (R(1) + norm2<R>(x))) {
      run.x = x;
      run.norm = nf;
      run.reason = "step below tolerance";
      return run;
    }
    R t(1);
    bool accepted = false;
    while (t >= R(cfg.min_step)) {
      std::vector<R> xn = x;
      for (std::size_t i = 0; i < x.size(); ++i) xn[i] += t * dx[i];
      auto fn = residual_t<R>(problem, xn);
      const R nn = norm2<R>(fn);
      if (is_finite(nn) && nn < (R(1) - R(1e-4) * t) * nf) {
        x = std::move(xn);
        fx = std::move(fn);
        nf = nn;
        accepted = true;
        break;
      }
      t *= R(cfg.backtrack);
    }
    if (!accepted) {
      run.x = x;
      run.norm = nf;
      run.reason = "line search failed";
      return run;
    }
    if (max_abs<R>(x) > R(1e6)) {
      run.x = x;
      run.norm = nf;
      run.reason = "iterate diverged";
      return run;
    }
  }
  run.x = x;
  run.norm = nf;
  run.iterations = max_iterations;
  run.reason = nf < tolerance ? "" : "iteration cap reached";
  return run;
}

// Undamped 50-digit Newton from a nearby point; keeps the best iterate.
std::vector<ExtReal> polish(const EpProblem& problem, std::vector<ExtReal> x) {
  auto fx = residual_t<ExtReal>(problem, x);
  ExtReal nf = norm2<ExtReal>(fx);
  for (int it = 0; it < kPolishIterations && nf > ExtReal(kExtTarget); ++it) {
    const auto jac = jacobian<ExtReal>(problem, x, fx, ExtReal(kExtStepRel));
    std::vector<ExtReal> neg(fx.size());
    for (std::size_t i = 0; i < fx.size(); ++i) neg[i] = -fx[i];
    std::vector<ExtReal> dx;
    if (!solve_linear<ExtReal>(jac, neg, dx)) break;
    std::vector<ExtReal> xn = x;
    for (std::size_t i = 0; i < x.size(); ++i) xn[i] += dx[i];
    auto fn = residual_t<ExtReal>(problem, xn);
    const ExtReal nn = norm2<ExtReal>(fn);
    if (!(nn < nf)) break;
    x = std::move(xn);
    fx = std::move(fn);
    nf = nn;
  }
  return x;
}

std::vector<ExtReal> widen(std::span<const double> x) { return {x.begin(), x.end()}; }

std::vector<double> narrow(std::span<const ExtReal> x) {
  std::vector<double> out;
  for (const auto& v : x) out.push_back(ptep::to_double(v));
  return out;
}

EpSolution assemble_solution(const EpProblem& problem, std::vector<ExtReal> x, int iterations) {
  x = canonicalize<ExtReal>(problem.order, x);
  EpSolution s;
  s.order = problem.order;
  s.mode = problem.mode;
  s.epsilon = problem.mode == Mode::full ? problem.epsilon : 0.0;
  const auto p = profile_from_unknowns<ExtReal>(problem, x);
  s.profile = model::to_double(p);
  const ExtReal gamma = trace_gamma(p);
  s.gamma = ptep::to_double(gamma);
  s.residual_norm = ptep::to_double(norm2<ExtReal>(residual_t<ExtReal>(problem, x)));
  const auto m = capacitance::assemble<ExtComplex>(problem.mode, p, ExtReal(problem.epsilon));
  s.kernel_dim = linalg::kernel_dimension(m, ExtComplex(gamma), kernel_tolerance(problem.mode));
  s.unknowns = std::move(x);
  s.iterations = iterations;
  return s;
}

struct DoubleStage {
  std::vector<double> x;
  double norm = 0.0;
  int iterations = 0;
  std::string reason;
  bool promising() const { return std::isfinite(norm) && norm < kPolishHandoff; }
};

DoubleStage double_stage(const EpProblem& problem, std::span<const double> start, const SolverConfig& cfg) {
  auto run = damped_newton<double>(problem, {start.begin(), start.end()}, cfg, 1e-7, cfg.residual_tolerance,
                                   cfg.max_iterations);
  return {std::move(run.x), run.norm, run.iterations, std::move(run.reason)};
}

NewtonResult finish(const EpProblem& problem, const DoubleStage& stage, const SolverConfig& cfg) {
  auto s = assemble_solution(problem, polish(problem, widen(stage.x)), stage.iterations);
  if (std::isfinite(s.residual_norm) && s.residual_norm < cfg.residual_tolerance) return s;
  return NonConvergence{stage.x, s.residual_norm, stage.iterations, "polish did not reach tolerance"};
}

NewtonResult extended_attempt(const EpProblem& problem, std::span<const double> start, const SolverConfig& cfg) {
  auto run = damped_newton<ExtReal>(problem, widen(start), cfg, ExtReal(kExtStepRel), ExtReal(kExtTarget),
                                    kFallbackIterations);
  if (run.norm < ExtReal(kPolishHandoff)) {
    auto s = assemble_solution(problem, polish(problem, run.x), run.iterations);
    if (s.residual_norm < cfg.residual_tolerance) return s;
  }
  return NonConvergence{narrow(run.x), ptep::to_double(run.norm), run.iterations,
                        run.reason.empty() ? "extended Newton did not converge" : run.reason};
}

bool within(std::span<const double> x, std::span<const double> y, double distance) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - y[i]) >= distance) return false;
  }
  return true;
}

// Sorted by family_key; keeps the first of every group closer than distance.
template <class T, class Key>
std::vector<T> dedupe_sorted(std::vector<T> items, int order, double distance, Key&& key) {
  std::sort(items.begin(), items.end(), [&](const T& x, const T& y) {
    return family_key(order, key(x)) < family_key(order, key(y));
  });
  std::vector<T> kept;
  for (auto& item : items) {
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const T& k) { return within(key(k), key(item), distance); });
    if (!dup) kept.push_back(std::move(item));
  }
  return kept;
}

double interp(std::span<const double> xp, std::span<const double> fp, double x) {
  if (x <= xp.front()) return fp.front();
  if (x >= xp.back()) return fp.back();
  for (std::size_t i = 1; i < xp.size(); ++i) {
    if (x <= xp[i]) {
      const double w = (x - xp[i - 1]) / (xp[i] - xp[i - 1]);
      return fp[i - 1] + w * (fp[i] - fp[i - 1]);
    }
  }
  return fp.back();
}

// Piecewise-linear on (xp, fp) with the first segment extended to the left.
double interp_extrapolate_left(std::span<const double> xp, std::span<const double> fp, double x) {
  if (x < xp.front() && xp.size() >= 3) {
    const double slope = (fp[1] - fp[0]) / (xp[1] - xp[0]);
    return fp[0] + slope * (x - xp[0]);
  }
  return interp(xp, fp, x);
}

double normalized_position(std::size_t i, int order) {
  return (static_cast<double>(i) + 1.0 - (order + 1) / 2.0) / (order / 2.0);
}

std::optional<EpSolution> continue_direct(const EpSolution& from, int target, const SolverConfig& cfg) {
  static constexpr double kScales[] = {1.0, 1.1, 0.9, 1.25, 0.8, 1.5, 0.67};
  const Pattern wanted = classify(from.profile);
  const EpProblem problem{target, Mode::leading, 0.0};
  for (double scale : kScales) {
    const auto seed = extend_seed(from, target, scale);
    auto result = newton_solve(problem, seed, cfg);
    auto* s = std::get_if<EpSolution>(&result);
    if (s && s->kernel_dim == 1 && classify(s->profile) == wanted) return std::move(*s);
  }
  return std::nullopt;
}

}  // namespace

void validate_problem(const EpProblem& problem) {
  if (problem.order < 2) throw InvalidInput("order must be >= 2");
  if (problem.mode == Mode::full && !(problem.epsilon >= 0.0 && problem.epsilon < 1.0)) {
    throw InvalidInput("epsilon must lie in [0, 1) in full mode");
  }
}

std::size_t unknown_count(int order) {
  if (order < 2) throw InvalidInput("order must be >= 2");
  return static_cast<std::size_t>(order - 1);
}

template <class R>
model::BasicProfile<R> profile_from_unknowns(const EpProblem& problem, std::span<const R> u) {
  validate_problem(problem);
  const int n_total = problem.order;
  if (u.size() != unknown_count(n_total)) {
    throw InvalidInput("expected " + std::to_string(n_total - 1) + " unknowns, got " + std::to_string(u.size()));
  }
  for (const auto& v : u) {
    if (!is_finite(v)) throw InvalidInput("unknowns must be finite");
  }
  const std::size_t n = static_cast<std::size_t>(n_total);
  const std::size_t half = n / 2;
  model::BasicProfile<R> p{std::vector<R>(n, R(model::first_a(problem.mode))), std::vector<R>(n, R(0))};
  p.b[0] = u[0];
  p.b[n - 1] = -u[0];
  for (std::size_t i = 1; i < half; ++i) {
    p.a[i] = p.a[n - 1 - i] = u[2 * i - 1];
    p.b[i] = u[2 * i];
    p.b[n - 1 - i] = -u[2 * i];
  }
  if (n % 2 == 1) p.a[half] = u[2 * half - 1];
  return p;
}

std::vector<double> unknowns_from_profile(const EpProblem& problem, const model::GainLossProfile& p) {
  validate_problem(problem);
  if (p.size() != static_cast<std::size_t>(problem.order)) {
    throw InvalidInput("profile has " + std::to_string(p.size()) + " sites, expected " +
                       std::to_string(problem.order));
  }
  model::require_valid(p, model::first_a(problem.mode));
  const std::size_t n = p.size();
  const std::size_t half = n / 2;
  std::vector<double> u{p.b[0]};
  for (std::size_t i = 1; i < half; ++i) {
    u.push_back(p.a[i]);
    u.push_back(p.b[i]);
  }
  if (n % 2 == 1) u.push_back(p.a[half]);
  return u;
}

template <class R>
std::vector<R> negate_gain_loss(int order, std::span<const R> unknowns) {
  if (unknowns.size() != unknown_count(order)) throw InvalidInput("unknown vector has the wrong length");
  std::vector<R> out(unknowns.begin(), unknowns.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!is_a_slot(k)) out[k] = -out[k];
  }
  return out;
}

template <class R>
std::vector<R> canonicalize(int order, std::span<const R> unknowns) {
  for (std::size_t k = 0; k < unknowns.size(); k += 2) {
    if (abs_value(unknowns[k]) > R(1e-12)) {
      if (unknowns[k] < R(0)) return negate_gain_loss<R>(order, unknowns);
      break;
    }
  }
  return {unknowns.begin(), unknowns.end()};
}

std::vector<double> family_key(int order, std::span<const double> unknowns) {
  if (unknowns.size() != unknown_count(order)) throw InvalidInput("unknown vector has the wrong length");
  std::vector<double> key;
  for (std::size_t k = 1; k < unknowns.size(); k += 2) key.push_back(unknowns[k]);
  for (std::size_t k = 0; k < unknowns.size(); k += 2) key.push_back(unknowns[k]);
  return key;
}

ResidualEvaluation evaluate_residual(const EpProblem& problem, std::span<const double> unknowns) {
  const auto p = profile_from_unknowns<double>(problem, unknowns);
  const auto mm = mismatch<Complex>(problem, p, trace_gamma(p));
  ResidualEvaluation out;
  out.gamma = mm.gamma;
  for (int k = 0; k < problem.order; ++k) {
    if (k + 1 < problem.order) out.values.push_back(mm.diff[k].real());
    out.imaginary_defect = std::max(out.imaginary_defect, std::abs(mm.diff[k].imag()));
  }
  out.consistent = out.imaginary_defect <= 1e-10 * (1.0 + mm.max_coeff);
  return out;
}

std::vector<double> residual(const EpProblem& problem, std::span<const double> unknowns) {
  return residual_t<double>(problem, unknowns);
}

std::vector<ExtReal> residual_ext(const EpProblem& problem, std::span<const ExtReal> unknowns) {
  return residual_t<ExtReal>(problem, unknowns);
}

void validate_config(const SolverConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.max_iterations <= 0) bad.emplace_back("max_iterations must be positive");
  if (!(cfg.step_tolerance > 0)) bad.emplace_back("step_tolerance must be positive");
  if (!(cfg.residual_tolerance > 0)) bad.emplace_back("residual_tolerance must be positive");
  if (!(cfg.backtrack > 0 && cfg.backtrack < 1)) bad.emplace_back("backtrack must lie in (0, 1)");
  if (!(cfg.min_step > 0 && cfg.min_step <= 1)) bad.emplace_back("min_step must lie in (0, 1]");
  if (cfg.starts <= 0) bad.emplace_back("starts must be positive");
  if (!(cfg.seed_box > 0)) bad.emplace_back("seed_box must be positive");
  if (!(cfg.dedupe_distance > 0)) bad.emplace_back("dedupe_distance must be positive");
  if (cfg.threads < 0) bad.emplace_back("threads must be >= 0");
  if (!bad.empty()) throw InvalidInput(bad.front());
}

double kernel_tolerance(Mode mode) { return mode == Mode::leading ? 1e-8 : 1e-6; }

NewtonResult newton_solve(const EpProblem& problem, std::span<const double> start, const SolverConfig& cfg) {
  validate_problem(problem);
  validate_config(cfg);
  if (start.size() != unknown_count(problem.order)) {
    throw InvalidInput("start must have " + std::to_string(problem.order - 1) + " entries");
  }
  const auto stage = double_stage(problem, start, cfg);
  if (stage.promising()) {
    auto result = finish(problem, stage, cfg);
    if (std::holds_alternative<EpSolution>(result) || !cfg.extended_fallback) return result;
  }
  if (cfg.extended_fallback) return extended_attempt(problem, start, cfg);
  return NonConvergence{stage.x, stage.norm, stage.iterations, stage.reason.empty() ? "not converged" : stage.reason};
}

std::vector<EpSolution> enumerate_families(const EpProblem& problem, const SolverConfig& cfg) {
  validate_problem(problem);
  validate_config(cfg);
  const std::size_t dim = unknown_count(problem.order);

  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> box(-cfg.seed_box, cfg.seed_box);
  std::vector<std::vector<double>> starts(static_cast<std::size_t>(cfg.starts), std::vector<double>(dim));
  for (auto& s : starts) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double u = box(rng);
      if (problem.mode == Mode::full) {
        s[k] = is_a_slot(k) ? 1.0 + problem.epsilon * u : problem.epsilon * u;
      } else {
        s[k] = u;
      }
    }
  }

  std::vector<DoubleStage> stages(starts.size());
  parallel_for(starts.size(), cfg.threads, [&](std::size_t i) { stages[i] = double_stage(problem, starts[i], cfg); });

  std::vector<DoubleStage> candidates;
  for (auto& st : stages) {
    if (!st.promising()) continue;
    st.x = canonicalize<double>(problem.order, st.x);
    candidates.push_back(std::move(st));
  }
  candidates = dedupe_sorted(std::move(candidates), problem.order, cfg.dedupe_distance,
                             [](const DoubleStage& s) -> std::span<const double> { return s.x; });

  std::vector<std::optional<EpSolution>> polished(candidates.size());
  parallel_for(candidates.size(), cfg.threads, [&](std::size_t i) {
    auto result = finish(problem, candidates[i], cfg);
    if (auto* s = std::get_if<EpSolution>(&result); s && s->kernel_dim == 1) polished[i] = std::move(*s);
  });

  struct Keyed {
    EpSolution solution;
    std::vector<double> u;
  };
  std::vector<Keyed> accepted;
  for (auto& p : polished) {
    if (!p) continue;
    auto u = narrow(p->unknowns);
    accepted.push_back({std::move(*p), std::move(u)});
  }
  accepted = dedupe_sorted(std::move(accepted), problem.order, cfg.dedupe_distance,
                           [](const Keyed& k) -> std::span<const double> { return k.u; });

  std::vector<EpSolution> out;
  for (auto& k : accepted) {
    k.solution.family_id = static_cast<int>(out.size());
    out.push_back(std::move(k.solution));
  }
  return out;
}

NewtonResult refine_full(const EpSolution& leading, double epsilon, const SolverConfig& cfg) {
  if (leading.mode != Mode::leading) throw InvalidInput("refine_full needs a leading-mode solution");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw InvalidInput("epsilon must lie in [0, 0.5)");
  validate_config(cfg);
  const int order = leading.order;
  const EpProblem lead_problem{order, Mode::leading, 0.0};
  const auto first = leading.unknowns.empty() ? unknowns_from_profile(lead_problem, leading.profile)
                                              : narrow(leading.unknowns);

  if (epsilon == 0.0) {
    EpSolution s;
    s.order = order;
    s.mode = Mode::full;
    s.epsilon = 0.0;
    s.profile = {std::vector<double>(order, 1.0), std::vector<double>(order, 0.0)};
    s.gamma = 1.0;
    s.residual_norm = 0.0;
    s.kernel_dim = order;
    s.family_id = leading.family_id;
    s.unknowns = widen(unknowns_from_profile({order, Mode::full, 0.0}, s.profile));
    return s;
  }

  auto seed_at = [&](double eps) {
    std::vector<double> u(first.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = is_a_slot(k) ? 1.0 + eps * first[k] : eps * first[k];
    return u;
  };

  NewtonResult last = newton_solve({order, Mode::full, epsilon}, seed_at(epsilon), cfg);
  if (auto* s = std::get_if<EpSolution>(&last)) {
    s->family_id = leading.family_id;
    return last;
  }
  for (int steps : {2, 4, 8, 16}) {
    std::vector<double> x = seed_at(epsilon / steps);
    bool ok = true;
    for (int k = 1; k <= steps && ok; ++k) {
      const double eps = epsilon * k / steps;
      auto r = newton_solve({order, Mode::full, eps}, x, cfg);
      if (auto* s = std::get_if<EpSolution>(&r)) {
        if (k == steps) {
          s->family_id = leading.family_id;
          return r;
        }
        // Next seed: current solution plus the first-order increment.
        const auto cur = narrow(s->unknowns);
        x = cur;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += (epsilon / steps) * first[i];
      } else {
        last = std::move(r);
        ok = false;
      }
    }
  }
  return last;
}

double third_order_c1() {
  auto f = [](double c) { return c * c * c + 6.75 * c - 3.375; };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<double>> analytic_seed(int order) {
  switch (order) {
    case 2:
      return {{1.0}};
    case 3: {
      const double c1 = third_order_c1();
      return {{std::sqrt(2.25 + c1 * c1 / 3.0), c1}};
    }
    case 4:
      return {{0.734, -1.15, -1.93}, {0.0456, -0.863, 2.00}, {1.87, 0.654, 0.56}, {1.70, 1.07, -1.13}};
    default:
      throw InvalidInput("analytic seeds exist for orders 2, 3 and 4 only");
  }
}

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::monotone:
      return "monotone";
    case Pattern::alternating:
      return "alternating";
    default:
      return "other";
  }
}

Pattern classify(const model::GainLossProfile& p) {
  const std::size_t n = p.size();
  const std::size_t half = n / 2;
  bool monotone = half >= 1;
  for (std::size_t i = 0; i < half && monotone; ++i) {
    if (!(p.b[i] * p.b[0] > 0.0)) monotone = false;
    if (i + 1 < half && !(std::abs(p.b[i]) > std::abs(p.b[i + 1]))) monotone = false;
  }
  if (monotone) return Pattern::monotone;

  std::vector<double> seq;
  for (std::size_t i = 0; i < n; ++i) {
    if (n % 2 == 1 && i == half) continue;
    seq.push_back(p.b[i]);
  }
  bool alternating = seq.size() >= 2;
  for (std::size_t i = 0; i + 1 < seq.size() && alternating; ++i) {
    if (!(seq[i] * seq[i + 1] < 0.0)) alternating = false;
  }
  return alternating ? Pattern::alternating : Pattern::other;
}

std::vector<double> extend_seed(const EpSolution& from, int target_order, double b_scale) {
  if (from.mode != Mode::leading) throw InvalidInput("seed extension needs a leading-mode solution");
  if (target_order < 2) throw InvalidInput("order must be >= 2");
  const auto& p = from.profile;
  const int src = from.order;
  const std::size_t src_half = static_cast<std::size_t>(src) / 2;
  if (p.size() != static_cast<std::size_t>(src) || src_half == 0) throw InvalidInput("malformed source solution");
  const bool alternating = classify(p) == Pattern::alternating;

  // Outer half on normalized positions in [-1, 0), closed by the centre.
  std::vector<double> t;
  std::vector<double> a_src;
  std::vector<double> b_src;
  std::vector<double> mag_src;
  for (std::size_t i = 0; i < src_half; ++i) {
    t.push_back(normalized_position(i, src));
    a_src.push_back(p.a[i]);
    b_src.push_back(p.b[i]);
    mag_src.push_back(std::abs(p.b[i]));
  }
  t.push_back(0.0);
  a_src.push_back(src % 2 == 1 ? p.a[src_half] : p.a[src_half - 1]);
  b_src.push_back(0.0);
  mag_src.push_back(mag_src.back());

  const std::size_t n = static_cast<std::size_t>(target_order);
  const std::size_t slots = (n + 1) / 2;
  const double sign0 = p.b[0] < 0.0 ? -1.0 : 1.0;
  std::vector<double> a(slots);
  std::vector<double> b(slots);
  for (std::size_t i = 0; i < slots; ++i) {
    const double tt = normalized_position(i, target_order);
    a[i] = interp_extrapolate_left(t, a_src, tt);
    if (alternating) {
      b[i] = sign0 * (i % 2 == 0 ? 1.0 : -1.0) * interp(t, mag_src, tt);
    } else {
      b[i] = interp_extrapolate_left(t, b_src, tt);
    }
    b[i] *= b_scale;
  }
  const double shift = a[0];
  for (auto& v : a) v -= shift;
  if (n % 2 == 1) b[slots - 1] = 0.0;

  std::vector<double> u{b[0]};
  for (std::size_t i = 1; i < n / 2; ++i) {
    u.push_back(a[i]);
    u.push_back(b[i]);
  }
  if (n % 2 == 1) u.push_back(a[n / 2]);
  return u;
}

std::optional<EpSolution> continue_family(const EpSolution& from, int target_order, const SolverConfig& cfg) {
  if (from.mode != Mode::leading) throw InvalidInput("continuation needs a leading-mode solution");
  if (target_order < 2) throw InvalidInput("order must be >= 2");
  validate_config(cfg);
  if (auto direct = continue_direct(from, target_order, cfg)) return direct;
  if (target_order - from.order <= 2) return std::nullopt;

  EpSolution current = from;
  for (int order = from.order + 2; order < target_order; order += 2) {
    auto next = continue_direct(current, order, cfg);
    if (!next) return std::nullopt;
    current = std::move(*next);
  }
  return continue_direct(current, target_order, cfg);
}

model::ExtProfile exact_profile(const EpSolution& s) {
  if (!s.unknowns.empty()) {
    return profile_from_unknowns<ExtReal>({s.order, s.mode, s.epsilon}, s.unknowns);
  }
  return model::to_ext(s.profile);
}

ExtReal exact_gamma(const EpSolution& s) { return trace_gamma(exact_profile(s)); }

linalg::ExtComplexMatrix exact_matrix(const EpSolution& s) {
  return capacitance::assemble<ExtComplex>(s.mode, exact_profile(s), ExtReal(s.epsilon));
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

VerifyReport verify(const EpSolution& s) {
  VerifyReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  auto sci = [](double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
  };

  const bool shape_ok = s.order >= 2 && s.profile.a.size() == static_cast<std::size_t>(s.order) &&
                        s.profile.b.size() == static_cast<std::size_t>(s.order) &&
                        (s.mode == Mode::leading || (s.epsilon >= 0.0 && s.epsilon < 1.0));
  add("shape", shape_ok,
      shape_ok ? "order " + std::to_string(s.order) : "order, profile length or epsilon inconsistent");
  if (!shape_ok) return report;

  const auto violations = model::validate_profile(s.profile, model::first_a(s.mode));
  std::string joined;
  for (const auto& v : violations) joined += (joined.empty() ? "" : "; ") + v;
  add("pt_symmetry", violations.empty(), violations.empty() ? "ok" : joined);

  bool canonical = true;
  for (std::size_t i = 0; i < s.profile.b.size(); ++i) {
    if (std::abs(s.profile.b[i]) > 1e-12) {
      canonical = s.profile.b[i] > 0.0;
      break;
    }
  }
  add("canonical_sign", canonical, canonical ? "ok" : "first nonzero b is negative");

  double trace = 0.0;
  for (double v : s.profile.a) trace += v;
  trace /= s.order;
  const bool trace_ok = std::abs(s.gamma - trace) <= 1e-10 * (1.0 + std::abs(s.gamma));
  add("trace_rule", trace_ok, "|gamma - mean(a)| = " + sci(std::abs(s.gamma - trace)));

  const EpProblem problem{s.order, s.mode, s.epsilon};
  const auto ext = model::to_ext(s.profile);
  const auto mm = mismatch<ExtComplex>(problem, ext, ExtReal(s.gamma));
  double worst = 0.0;
  for (const auto& d : mm.diff) worst = std::max(worst, ptep::to_double(abs(d)));
  add("coefficients", worst <= 1e-10, "max coefficient mismatch " + sci(worst));

  const bool stored_ok = std::isfinite(s.residual_norm) && s.residual_norm <= 1e-10;
  add("residual_norm", stored_ok, "stored " + sci(s.residual_norm));

  const auto m = capacitance::assemble<ExtComplex>(s.mode, ext, ExtReal(s.epsilon));
  const int kdim = linalg::kernel_dimension(m, ExtComplex(ExtReal(s.gamma)), kernel_tolerance(s.mode));
  add("kernel_dimension", kdim == 1 && s.kernel_dim == 1,
      "computed " + std::to_string(kdim) + ", stored " + std::to_string(s.kernel_dim));

  if (s.unknowns.empty()) {
    add("unknowns", true, "no extended unknowns stored");
  } else if (s.unknowns.size() != unknown_count(s.order)) {
    add("unknowns", false, "wrong number of extended unknowns");
  } else {
    const auto p = model::to_double(exact_profile(s));
    double diff = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      diff = std::max(diff, std::abs(p.a[i] - s.profile.a[i]) / (1.0 + std::abs(p.a[i])));
      diff = std::max(diff, std::abs(p.b[i] - s.profile.b[i]) / (1.0 + std::abs(p.b[i])));
    }
    add("unknowns", diff <= 1e-12, "max relative difference " + sci(diff));
  }
  return report;
}

template model::BasicProfile<double> profile_from_unknowns(const EpProblem&, std::span<const double>);
template model::BasicProfile<ExtReal> profile_from_unknowns(const EpProblem&, std::span<const ExtReal>);
template std::vector<double> negate_gain_loss(int, std::span<const double>);
template std::vector<ExtReal> negate_gain_loss(int, std::span<const ExtReal>);
template std::vector<double> canonicalize(int, std::span<const double>);
template std::vector<ExtReal> canonicalize(int, std::span<const ExtReal>);

}  // namespace ptep::epfinder
