// Acceptance checks, one line per criterion. Usage: acceptance [--criterion N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcpower/errors.hpp"
#include "dcpower/harness/commands.hpp"
#include "dcpower/large_system.hpp"
#include "dcpower/netsim.hpp"
#include "dcpower/units.hpp"

namespace {

using namespace dcpower;
namespace ls = dcpower::large_system;
namespace ns = dcpower::netsim;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "MISS ") + what;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Reference {
  SystemParams params;
  EfficiencyModel model{100};
  double gs = solve_gamma_star(model).gamma;
  DelayClass a = target_sir(1, 0.99, model, gs);
  DelayClass b = target_sir(3, 0.90, model, gs);
};

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Outcome gamma_star_reproduction() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto star = solve_gamma_star(EfficiencyModel(100));
  const double ms = elapsed_ms(t0);
  out.require(std::abs(star.gamma - 6.48) <= 0.01, fmt("gamma* = %.6f (6.48 +- 0.01)", star.gamma));
  out.require(std::abs(to_db(star.gamma) - 8.1) <= 0.01,
              fmt("%.4f dB (8.1 +- 0.01 dB)", to_db(star.gamma)));
  out.require(ms < 1.0, fmt("solve %.3f ms (< 1 ms)", ms));
  return out;
}

Outcome class_targets() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const EfficiencyModel model(100);
  const double gs = solve_gamma_star(model).gamma;
  const auto a = target_sir(1, 0.99, model, gs);
  const auto b = target_sir(3, 0.90, model, gs);
  const double ms = elapsed_ms(t0);
  out.require(std::abs(to_db(a.gamma_tilde_star) - 9.6) <= 0.05,
              fmt("A: %.4f dB (9.6 +- 0.05)", to_db(a.gamma_tilde_star)));
  out.require(std::abs(to_db(b.gamma_tilde_star) - 8.1) <= 0.01,
              fmt("B: %.4f dB (8.1 +- 0.01)", to_db(b.gamma_tilde_star)));
  out.require(b.gamma_tilde_star == gs, "B floored at gamma*");
  out.require(ms < 1.0, fmt("%.3f ms (< 1 ms)", ms));
  return out;
}

Outcome utility_loss_headline() {
  Outcome out;
  Reference ref;
  const auto t0 = std::chrono::steady_clock::now();
  const ls::LoadProfile load{{ref.a, ref.b}, {0.05, 0.05}};
  const double ua = ls::utility_loss_ratio(ref.params, load, ReceiverKind::MatchedFilter, 0, ref.gs);
  const double ub = ls::utility_loss_ratio(ref.params, load, ReceiverKind::MatchedFilter, 1, ref.gs);
  const double ms = elapsed_ms(t0);
  out.require(std::abs(ua - 0.50) <= 0.02, fmt("u_A/u = %.4f (0.50 +- 0.02)", ua));
  out.require(std::abs(ub - 0.60) <= 0.02, fmt("u_B/u = %.4f (0.60 +- 0.02)", ub));
  out.require(ms < 1.0, fmt("%.3f ms (< 1 ms)", ms));
  return out;
}

Outcome decorrelator_load_independence() {
  Outcome out;
  Reference ref;
  double lo = 1e300;
  double hi = -1e300;
  bool b_exact = true;
  int points = 0;
  for (double alpha : {0.1, 0.5, 0.9}) {
    for (int i = 0; i <= 20; ++i) {
      const double frac = 0.05 * i;
      const ls::LoadProfile load{{ref.a, ref.b}, {alpha * frac, alpha * (1.0 - frac)}};
      const double ua = ls::utility_loss_ratio(ref.params, load, ReceiverKind::Decorrelator, 0, ref.gs);
      const double ub = ls::utility_loss_ratio(ref.params, load, ReceiverKind::Decorrelator, 1, ref.gs);
      lo = std::min(lo, ua);
      hi = std::max(hi, ua);
      b_exact = b_exact && ub == 1.0;
      ++points;
    }
  }
  out.require((hi - lo) <= 1e-12 * hi,
              fmt("u_A/u in [%.15f, %.15f] over %.0f points", lo, hi, points));
  out.require(b_exact, "u_B/u == 1 exactly");
  return out;
}

Outcome receiver_ordering() {
  Outcome out;
  Reference ref;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> beta(0.05, 0.999), unit(0.0, 1.0);
  std::uniform_int_distribution<int> d(1, 5), n_classes(1, 4);
  int profiles = 0;
  int violations = 0;
  while (profiles < 1000) {
    ls::LoadProfile load;
    const int n = n_classes(rng);
    for (int c = 0; c < n; ++c) {
      load.classes.push_back(target_sir(d(rng), beta(rng), ref.model, ref.gs));
      load.alphas.push_back(0.1 * unit(rng));
    }
    if (!(load.total_alpha() > 0.0) || !ls::feasibility(load, ReceiverKind::MatchedFilter).feasible) {
      continue;
    }
    for (std::size_t c = 0; c < load.classes.size(); ++c) {
      const double mf = ls::equilibrium_utility(ref.params, load, ReceiverKind::MatchedFilter, c);
      const double de = ls::equilibrium_utility(ref.params, load, ReceiverKind::Decorrelator, c);
      const double mmse = ls::equilibrium_utility(ref.params, load, ReceiverKind::MMSE, c);
      if (!(mmse > de && de > mf)) ++violations;
    }
    ++profiles;
  }
  const double ms = elapsed_ms(t0);
  out.require(violations == 0, fmt("%.0f profiles, %.0f violations", profiles, violations));
  out.require(ms < 1000.0, fmt("%.1f ms (< 1 s)", ms));
  return out;
}

Outcome unconstrained_reduction() {
  Outcome out;
  Reference ref;
  const auto loose1 = target_sir(2, 0.5, ref.model, ref.gs);
  const auto loose2 = target_sir(3, 0.9, ref.model, ref.gs);
  const auto loose3 = target_sir(1, 0.3, ref.model, ref.gs);
  out.require(loose1.gamma_tilde <= ref.gs && loose2.gamma_tilde <= ref.gs &&
                  loose3.gamma_tilde <= ref.gs,
              "all floors at or below gamma*");
  double worst = 0.0;
  for (double alpha : {0.01, 0.05, 0.1, 0.15}) {
    const ls::LoadProfile load{{loose1, loose2, loose3}, {0.2 * alpha, 0.3 * alpha, 0.5 * alpha}};
    for (auto rx : kAllReceivers) {
      const double closed = ls::unconstrained_utility(ref.params, ref.gs, alpha, rx);
      for (std::size_t c = 0; c < 3; ++c) {
        const double u = ls::equilibrium_utility(ref.params, load, rx, c);
        worst = std::max(worst, std::abs(u - closed) / closed);
      }
    }
  }
  out.require(worst <= 1e-12, fmt("max relative difference %.2e (<= 1e-12)", worst));
  return out;
}

Outcome finite_system_consistency() {
  Outcome out;
  Reference ref;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<DelayClass> only_b{ref.b};
  ns::MonteCarloOptions opt;
  opt.trials = 200;
  opt.seed = 42;
  opt.check_nash = false;
  for (auto rx : kAllReceivers) {
    const std::string name(receiver_name(rx));
    SystemParams small = ref.params;
    small.processing_gain = 100;
    SystemParams large = ref.params;
    large.processing_gain = 200;
    const std::size_t k10[] = {10};
    const std::size_t k20[] = {20};
    const auto r100 = ns::monte_carlo_utilities(small, only_b, k10, rx, opt);
    const auto r200 = ns::monte_carlo_utilities(large, only_b, k20, rx, opt);
    const auto& st = r100.classes[0];
    out.require(st.prediction_available && st.rel_gap <= 0.05,
                name + fmt(": mean gap %.4f (<= 0.05), censored %.0f/200", st.rel_gap,
                           static_cast<double>(r100.censored)));
    const double m100 = r100.median_gap(0);
    const double m200 = r200.median_gap(0);
    out.require(m200 < m100, name + fmt(": median gap N=100 %.4f > N=200 %.4f", m100, m200));
  }
  const double s = elapsed_ms(t0) / 1000.0;
  out.require(s < 120.0, fmt("%.1f s (< 2 min)", s));
  return out;
}

Outcome nash_property() {
  Outcome out;
  Reference ref;
  const std::vector<DelayClass> classes{ref.a, ref.b};
  const std::size_t counts[] = {3, 7};
  ns::MonteCarloOptions opt;
  opt.trials = 50;
  opt.seed = 42;
  for (auto rx : kAllReceivers) {
    const auto r = ns::monte_carlo_utilities(ref.params, classes, counts, rx, opt);
    const double converged = static_cast<double>(r.trials.size() - r.censored);
    out.require(r.nash_checked > 0 && r.nash_passed == r.nash_checked,
                std::string(receiver_name(rx)) +
                    fmt(": %.0f/%.0f users pass over %.0f equilibria",
                        static_cast<double>(r.nash_passed), static_cast<double>(r.nash_checked),
                        converged));
  }
  return out;
}

Outcome invariant_suite() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  int round_trip_bad = 0;
  int derivative_bad = 0;
  for (int m : {10, 100, 1000}) {
    const EfficiencyModel model(m);
    for (double g = 0.5; g <= 15.0; g += 0.01) {
      const double f = model.value(g);
      if (f >= 1.0 || f < 1e-300) continue;
      if (std::abs(model.inverse(f) - g) > 1e-8 * g) ++round_trip_bad;
      const double h = 1e-6 * g;
      const double fd = (model.value(g + h) - model.value(g - h)) / (2.0 * h);
      const double exact = model.derivative(g);
      if (exact < 1e-280) continue;
      if (std::abs(fd - exact) > 1e-6 * exact + 4.0 * m * 1.2e-16 / h) ++derivative_bad;
    }
  }
  out.require(round_trip_bad == 0, fmt("inverse round trip: %.0f misses", round_trip_bad));
  out.require(derivative_bad == 0, fmt("derivative vs differences: %.0f misses", derivative_bad));

  bool eta_monotone = true;
  for (int d = 1; d <= 6; ++d) {
    double prev = 0.0;
    for (double beta = 0.01; beta < 0.999; beta += 0.001) {
      const double e = eta(d, beta);
      if (!(e > prev)) eta_monotone = false;
      if (d > 1 && !(eta(d - 1, beta) > e)) eta_monotone = false;
      prev = e;
    }
  }
  out.require(eta_monotone, "eta increasing in beta, decreasing in D");

  int interference_bad = 0;
  int invariance_bad = 0;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> scale(1.0, 20.0);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    ns::NetworkRealization net;
    net.sequences = ns::generate_sequences(32, 12, seed);
    net.gains.assign(12, 1.0);
    net.targets.assign(12, 6.4746);
    net.thresholds = net.targets;
    net.class_of.assign(12, 0);
    net.noise_power = 5e-16;
    net.p_max = 1.0;
    for (int k = 0; k < 12; ++k) net.powers.push_back(5e-16 * scale(rng));
    const auto t_of = [](const ns::NetworkRealization& n, ReceiverKind rx, std::size_t k) {
      return n.powers[k] * n.targets[k] / ns::sir(n, rx, k);
    };
    for (auto rx : kAllReceivers) {
      for (std::size_t k = 0; k < 12; ++k) {
        const double base = t_of(net, rx, k);
        auto louder = net;
        louder.powers[(k + 5) % 12] *= scale(rng);
        auto scaled = net;
        for (auto& p : scaled.powers) p *= 1.7;
        if (!(base > 0.0) || t_of(louder, rx, k) < base * (1.0 - 1e-12) ||
            !(t_of(scaled, rx, k) < 1.7 * base)) {
          ++interference_bad;
        }
        if (rx == ReceiverKind::Decorrelator) {
          const double before = ns::sir(net, rx, k);
          const double after = ns::sir(louder, rx, k);
          if (std::abs(after - before) > 1e-12 * before) ++invariance_bad;
        }
      }
    }
  }
  out.require(interference_bad == 0,
              fmt("interference function: %.0f misses", interference_bad));
  out.require(invariance_bad == 0, fmt("decorrelator invariance: %.0f misses", invariance_bad));
  const double s = elapsed_ms(t0) / 1000.0;
  out.require(s < 10.0, fmt("%.2f s (< 10 s)", s));
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "dcpower_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::vector<fs::path>> runs;
  for (const char* sub : {"run1", "run2"}) {
    auto cfg = harness::default_config();
    harness::apply_seed(cfg, 42);
    std::vector<fs::path> files;
    for (const auto& table : harness::cmd_fig23(cfg)) {
      for (const auto& f : harness::save_table(table, root / sub, {"csv"})) files.push_back(f);
    }
    runs.push_back(std::move(files));
  }
  bool same = runs[0].size() == runs[1].size() && !runs[0].empty();
  std::size_t bytes = 0;
  for (std::size_t i = 0; same && i < runs[0].size(); ++i) {
    const auto a = slurp(runs[0][i]);
    same = a == slurp(runs[1][i]) && !a.empty();
    bytes += a.size();
  }
  out.require(same, fmt("%.0f CSV files, %.0f bytes, identical", static_cast<double>(runs[0].size()),
                        static_cast<double>(bytes)));
  fs::remove_all(root);
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "gamma* reproduction", gamma_star_reproduction},
      {2, "class targets", class_targets},
      {3, "utility-loss headline", utility_loss_headline},
      {4, "decorrelator load independence", decorrelator_load_independence},
      {5, "receiver ordering", receiver_ordering},
      {6, "unconstrained reduction", unconstrained_reduction},
      {7, "finite-system consistency", finite_system_consistency},
      {8, "Nash property", nash_property},
      {9, "invariant suite", invariant_suite},
      {10, "determinism", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d %s: %s (%s) [%.1f ms]\n", c.id, o.pass ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), elapsed_ms(t0));
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
