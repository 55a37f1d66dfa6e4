#include "ptep/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "ptep/capacitance.hpp"
#include "ptep/epfinder.hpp"
#include "ptep/errors.hpp"
#include "ptep/json_io.hpp"
#include "ptep/sensing.hpp"
#include "ptep/spectra.hpp"

namespace ptep::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNoResult = 2;

struct Globals {
  std::string out_path;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Raised for a missing family and similar "nothing to report" outcomes.
struct NoResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Destination for the main artifact; status lines go to `out` when the
// artifact is written to a file and to `err` when it occupies stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out, std::ostream& err) : out_(out), err_(err) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidInput("cannot write " + path);
    }
  }
  std::ostream& data() { return file_ ? *file_ : out_; }
  std::ostream& status() { return file_ ? out_ : err_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<std::ofstream> file_;
};

std::vector<epfinder::EpSolution> load(const std::string& path) {
  return json_io::solutions_from_json(json_io::parse_file(path));
}

const epfinder::EpSolution& pick(const std::vector<epfinder::EpSolution>& list, int family) {
  for (const auto& s : list) {
    if (s.family_id == family) return s;
  }
  throw NoResult("family " + std::to_string(family) + " not found");
}

// --------------------------------------------------------------- find-ep

struct FindOptions {
  int order = 0;
  std::string mode = "leading";
  std::optional<double> epsilon;
  int starts = 500;
  double seed_box = 3.0;
  std::string extend_from;
  std::optional<int> extend_family;
};

int find_ep(const FindOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  if (o.order < 2) {
    err << "order must be ≥ 2\n";
    return kUsage;
  }
  const auto mode = model::parse_mode(o.mode);
  if (mode == model::Mode::full) {
    if (!o.epsilon) {
      err << "--epsilon is required in full mode\n";
      return kUsage;
    }
    if (!(*o.epsilon > 0.0 && *o.epsilon < 0.5)) {
      err << "epsilon must lie in (0, 0.5)\n";
      return kUsage;
    }
  }
  if (o.starts < 1) {
    err << "starts must be >= 1\n";
    return kUsage;
  }
  if (!(o.seed_box > 0.0)) {
    err << "seed-box must be positive\n";
    return kUsage;
  }

  epfinder::SolverConfig cfg;
  cfg.starts = o.starts;
  cfg.seed_box = o.seed_box;
  cfg.rng_seed = g.seed;
  cfg.threads = g.threads;

  std::vector<epfinder::EpSolution> leading;
  if (o.extend_from.empty()) {
    leading = epfinder::enumerate_families({o.order, model::Mode::leading, 0.0}, cfg);
  } else {
    std::vector<epfinder::EpSolution> grown;
    for (const auto& src : load(o.extend_from)) {
      if (src.mode != model::Mode::leading) continue;
      if (o.extend_family && src.family_id != *o.extend_family) continue;
      if (src.order == o.order) {
        grown.push_back(src);
      } else if (auto s = epfinder::continue_family(src, o.order, cfg)) {
        grown.push_back(std::move(*s));
      } else {
        err << "family " << src.family_id << " did not continue to order " << o.order << '\n';
      }
    }
    std::sort(grown.begin(), grown.end(), [&](const auto& x, const auto& y) {
      const auto kx = epfinder::family_key(o.order, epfinder::unknowns_from_profile({o.order}, x.profile));
      const auto ky = epfinder::family_key(o.order, epfinder::unknowns_from_profile({o.order}, y.profile));
      return kx < ky;
    });
    for (std::size_t i = 0; i < grown.size(); ++i) grown[i].family_id = static_cast<int>(i);
    leading = std::move(grown);
  }

  std::vector<epfinder::EpSolution> result;
  if (mode == model::Mode::leading) {
    result = std::move(leading);
  } else {
    for (const auto& s : leading) {
      auto r = epfinder::refine_full(s, *o.epsilon, cfg);
      if (auto* full = std::get_if<epfinder::EpSolution>(&r); full && full->kernel_dim == 1) {
        result.push_back(std::move(*full));
      } else {
        err << "family " << s.family_id << " did not refine to epsilon " << g17(*o.epsilon) << '\n';
      }
    }
  }

  Sink sink(g.out_path, out, err);
  sink.data() << json_io::dump(json_io::to_json(result)) << '\n';
  sink.status() << "found " << result.size() << " famil" << (result.size() == 1 ? "y" : "ies") << " of order "
                << o.order << " (" << o.mode << " mode)\n";
  return result.empty() ? kNoResult : kOk;
}

// ----------------------------------------------------------------- sweep

struct FrequencyOptions {
  double epsilon = 0.1;
  double delta = model::PhysicalConstants{}.delta;
  double a_scale = model::PhysicalConstants{}.a_scale;
  double volume = model::PhysicalConstants{}.volume;

  model::PhysicalConstants constants() const { return {delta, a_scale, volume}; }
};

void add_frequency_flags(CLI::App* sub, FrequencyOptions& f) {
  sub->add_option("--epsilon", f.epsilon, "Diluteness used to map leading-mode eigenvalues")->capture_default_str();
  sub->add_option("--delta", f.delta, "Material contrast")->capture_default_str();
  sub->add_option("--a-scale", f.a_scale, "Material scale a")->capture_default_str();
  sub->add_option("--volume", f.volume, "Resonator volume |D_1|")->capture_default_str();
}

struct SweepOptions {
  std::string ep;
  int family = 0;
  double tau_min = 0.0;
  double tau_max = 2.0;
  int steps = 401;
  bool with_frequencies = false;
  FrequencyOptions freq;
};

int sweep(const SweepOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto list = load(o.ep);
  const auto& s = pick(list, o.family);
  const auto taus = spectra::tau_grid(o.tau_min, o.tau_max, o.steps);
  const auto profile = epfinder::exact_profile(s);
  const auto traj = spectra::sweep(profile, s.mode, s.epsilon, taus, g.threads);

  std::optional<spectra::CsvFrequencies> freq;
  if (o.with_frequencies) {
    freq = spectra::CsvFrequencies{o.freq.constants(), std::nullopt};
    if (s.mode == model::Mode::leading) freq->leading_epsilon = o.freq.epsilon;
  }

  double gap_at_one = -1.0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (taus[k] == 1.0) gap_at_one = traj.coalescence_gap[k];
  }
  if (gap_at_one < 0.0) {
    const double one[] = {1.0};
    gap_at_one = spectra::sweep(profile, s.mode, s.epsilon, one, 1).coalescence_gap.front();
  }

  Sink sink(g.out_path, out, err);
  spectra::write_csv(sink.data(), traj, freq);
  sink.status() << "coalescence gap at tau=1: " << g17(gap_at_one) << '\n';
  return kOk;
}

// ----------------------------------------------------------- frequencies

struct FrequenciesOptions {
  std::string ep;
  std::optional<int> family;
  std::vector<double> gammas;
  FrequencyOptions freq;
};

int frequencies(const FrequenciesOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  if (o.ep.empty() == o.gammas.empty()) {
    err << "give either --ep or --gamma\n";
    return kUsage;
  }
  const auto constants = o.freq.constants();
  for (const auto& w : model::constants_warnings(constants)) err << "warning: " << w << '\n';

  struct Row {
    int family;
    std::vector<Complex> gammas;
  };
  std::vector<Row> rows;
  if (!o.gammas.empty()) {
    rows.push_back({-1, {o.gammas.begin(), o.gammas.end()}});
  } else {
    const auto list = load(o.ep);
    if (o.family) pick(list, *o.family);
    for (const auto& s : list) {
      if (o.family && s.family_id != *o.family) continue;
      const auto eig = linalg::eigenvalues(epfinder::exact_matrix(s));
      std::vector<Complex> lambdas;
      for (const auto& z : eig.eigenvalues) lambdas.push_back(to_complex(z));
      if (s.mode == model::Mode::leading) lambdas = spectra::full_from_leading(lambdas, o.freq.epsilon);
      rows.push_back({s.family_id, std::move(lambdas)});
    }
  }

  Sink sink(g.out_path, out, err);
  auto& os = sink.data();
  os << "family,index,gamma_re,gamma_im,omega_re,omega_im,resonant\n";
  for (const auto& row : rows) {
    const auto fm = spectra::to_frequencies(row.gammas, constants);
    for (std::size_t i = 0; i < fm.gammas.size(); ++i) {
      os << row.family << ',' << i + 1 << ',' << g17(fm.gammas[i].real()) << ',' << g17(fm.gammas[i].imag()) << ','
         << g17(fm.omegas[i].real()) << ',' << g17(fm.omegas[i].imag()) << ',' << (fm.resonant[i] ? 1 : 0) << '\n';
      if (!fm.resonant[i]) sink.status() << "eigenvalue " << i + 1 << " is zero: not a subwavelength resonance\n";
    }
  }
  return kOk;
}

// ----------------------------------------------------------------- sense

struct SenseOptions {
  std::string ep;
  int family = 0;
  int site = 0;
  double s_min = 1e-8;
  double s_max = 1e-3;
  int points = 25;
};

int sense(const SenseOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto list = load(o.ep);
  const auto& s = pick(list, o.family);
  if (o.site < 1 || o.site > s.order) {
    err << "site must lie in 1.." << s.order << '\n';
    return kUsage;
  }
  if (!(o.s_min > 0.0 && o.s_min < o.s_max)) {
    err << "need 0 < s-min < s-max\n";
    return kUsage;
  }
  const auto spec = sensing::PerturbationSpec::diagonal(static_cast<std::size_t>(o.site),
                                                        sensing::log_grid(o.s_min, o.s_max, o.points));
  const auto fit =
      sensing::split(epfinder::exact_matrix(s), ExtComplex(epfinder::exact_gamma(s)), spec, g.threads);

  Sink sink(g.out_path, out, err);
  sensing::write_csv(sink.data(), fit, s.order);
  sink.status() << "slope " << g17(fit.slope) << " (expected " << g17(1.0 / s.order) << "), r^2 "
                << g17(fit.r_squared) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- verify

int verify(const std::string& path, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto list = load(path);
  Sink sink(g.out_path, out, err);
  auto& os = sink.data();
  bool all = !list.empty();
  if (list.empty()) os << "no solutions in " << path << '\n';
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto report = epfinder::verify(list[i]);
    all = all && report.passed();
    os << "entry " << i << " (family " << list[i].family_id << ", order " << list[i].order << ", "
       << model::to_string(list[i].mode) << "): " << (report.passed() ? "PASS" : "FAIL") << '\n';
    for (const auto& c : report.checks) {
      os << "  " << (c.passed ? "ok  " : "FAIL") << ' ' << c.name << ": " << c.detail << '\n';
    }
  }
  return all ? kOk : kNoResult;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exceptional points of PT-symmetric subwavelength resonator arrays", "ptep"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--out", g.out_path, "Write the result to this file instead of standard output");
  app.add_option("--seed", g.seed, "Random seed for multi-start searches")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str()->check(
      CLI::NonNegativeNumber);

  FindOptions find_o;
  auto* find = app.add_subcommand("find-ep", "Locate exceptional points and write them as JSON");
  find->add_option("--order", find_o.order, "Number of resonators N")->required();
  find->add_option("--mode", find_o.mode, "leading or full")->capture_default_str()->check(
      CLI::IsMember({"leading", "full"}));
  find->add_option("--epsilon", find_o.epsilon, "Diluteness for full mode");
  find->add_option("--starts", find_o.starts, "Multi-start count")->capture_default_str();
  find->add_option("--seed-box", find_o.seed_box, "Half-width of the start box")->capture_default_str();
  find->add_option("--extend-from", find_o.extend_from,
                   "Grow the leading-mode families in this file to --order instead of a random search");
  find->add_option("--extend-family", find_o.extend_family, "Only grow this family of --extend-from");

  SweepOptions sweep_o;
  auto* sw = app.add_subcommand("sweep", "Eigenvalue paths as gain/loss is scaled by tau (CSV)");
  sw->add_option("--ep", sweep_o.ep, "EpSolution JSON file")->required();
  sw->add_option("--family", sweep_o.family, "family_id to sweep")->capture_default_str();
  sw->add_option("--tau-min", sweep_o.tau_min)->capture_default_str();
  sw->add_option("--tau-max", sweep_o.tau_max)->capture_default_str();
  sw->add_option("--steps", sweep_o.steps)->capture_default_str();
  sw->add_flag("--with-frequencies", sweep_o.with_frequencies, "Append resonant-frequency columns");
  add_frequency_flags(sw, sweep_o.freq);

  FrequenciesOptions freq_o;
  auto* fq = app.add_subcommand("frequencies", "Map capacitance eigenvalues to resonant frequencies (CSV)");
  fq->add_option("--ep", freq_o.ep, "EpSolution JSON file");
  fq->add_option("--family", freq_o.family, "Only this family_id");
  fq->add_option("--gamma", freq_o.gammas, "Capacitance eigenvalues to map directly");
  add_frequency_flags(fq, freq_o.freq);

  SenseOptions sense_o;
  auto* se = app.add_subcommand("sense", "Eigenvalue splitting under a diagonal perturbation (CSV + fit)");
  se->add_option("--ep", sense_o.ep, "EpSolution JSON file")->required();
  se->add_option("--family", sense_o.family)->capture_default_str();
  se->add_option("--site", sense_o.site, "Perturbed resonator, 1-based")->required();
  se->add_option("--s-min", sense_o.s_min)->capture_default_str();
  se->add_option("--s-max", sense_o.s_max)->capture_default_str();
  se->add_option("--points", sense_o.points)->capture_default_str();

  std::string verify_path;
  auto* ve = app.add_subcommand("verify", "Re-check every solution in an EpSolution JSON file");
  ve->add_option("--ep,ep", verify_path, "EpSolution JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*find) return find_ep(find_o, g, out, err);
    if (*sw) return sweep(sweep_o, g, out, err);
    if (*fq) return frequencies(freq_o, g, out, err);
    if (*se) return sense(sense_o, g, out, err);
    if (*ve) return verify(verify_path, g, out, err);
  } catch (const NoResult& e) {
    err << e.what() << '\n';
    return kNoResult;
  } catch (const InsufficientData& e) {
    err << e.what() << '\n';
    return kNoResult;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNoResult;
  }
  return kUsage;
}

}  // namespace ptep::cli
