// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "soqd/correlation.hpp"
#include "soqd/figures.hpp"
#include "soqd/oracle.hpp"
#include "soqd/propagator.hpp"
#include "soqd/sweep.hpp"
#include "test_support.hpp"

namespace {

using namespace soqd;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::vector<double> kTauGrid = uniform_grid(0.0, 10.0, 21);

// 1. Closed form vs RK4, 1000 draws, <= 1e-8, < 5 s.
Outcome closed_form_vs_ode() {
  testing::Draws draws(1001);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const StepParams step = draws.step();
    worst = std::max(worst, max_abs_diff(step_transform(step), step_transform_ode(step, 1e-3)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-8 && elapsed < 5.0,
          fmt::format("max |d| = {:.2e} (tol 1e-8), {:.2f} s (limit 5 s)", worst, elapsed)};
}

// 2. Unitarity of every step and composed transform over the same ranges.
Outcome unitarity_suite() {
  testing::Draws draws(1001);
  double worst_step = 0.0;
  double worst_composed = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const StepParams step = draws.step();
    worst_step = std::max(worst_step, unitarity_defect(step_transform(step)));
  }
  testing::Draws schedule_draws(1002);
  for (int i = 0; i < 1000; ++i) {
    const StepParams a = schedule_draws.step();
    const StepParams b = schedule_draws.step();
    const ModelParams p{a.alpha1, a.alpha2, a.beta, b.beta, b.alpha1};
    const Schedule s = build_schedule(p, a.duration, b.duration);
    for (const auto& step : s.steps) {
      worst_step = std::max(worst_step, unitarity_defect(step_transform(step)));
    }
    worst_composed = std::max(worst_composed, unitarity_defect(compose(s)));
  }
  return {worst_step <= 1e-10 && worst_composed <= 1e-10,
          fmt::format("max defect step {:.2e}, composed {:.2e} (tol 1e-10)", worst_step,
                      worst_composed)};
}

// 3. F(t, t) = 1 and d_e = d_g => F = 1, 200 draws, every route.
Outcome telescoping() {
  testing::Draws draws(1003);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    ModelParams p = draws.params();
    const double t = draws.uniform(0.0, 10.0);
    const double tp = draws.uniform(0.0, 10.0);
    const cplx beta0 = draws.amplitude(10.0);
    const auto n = draws.integer(0, 10000);
    const auto n_small = draws.integer(0, 20);

    const auto deviation = [&](const ModelParams& q, double t1, double t2) {
      return std::max({std::abs(decoherence_factor_coherent(q, beta0, t1, t2) - 1.0),
                       std::abs(decoherence_factor_fock_closed(q, n, t1, t2) - 1.0),
                       std::abs(decoherence_factor_oracle_fock(q, n_small, t1, t2) - 1.0)});
    };
    worst = std::max(worst, deviation(p, t, t));
    p.d_g = p.d_e;
    worst = std::max(worst, deviation(p, t, tp));
  }
  return {worst <= 1e-9, fmt::format("max |F - 1| = {:.2e} (tol 1e-9)", worst)};
}

// 4. Closed vs oracle (1e-9) and quadrature (1e-6) for Fock n in {1,2,5,10,40}.
Outcome triple_agreement() {
  const auto start = Clock::now();
  double worst_oracle = 0.0;
  double worst_quad = 0.0;
  for (std::uint64_t n : {1u, 2u, 5u, 10u, 40u}) {
    const SectorOracle oracle = SectorOracle::single(kFigureParams, n);
    const QuadratureSpec quad = default_quadrature(n);
    for (double t : {0.0, 10.0}) {
      for (double tau : kTauGrid) {
        const cplx closed = decoherence_factor_fock_closed(kFigureParams, n, t, t + tau);
        worst_oracle = std::max(worst_oracle, std::abs(closed - oracle.fock(n, t, t + tau)));
        worst_quad = std::max(
            worst_quad,
            std::abs(closed - decoherence_factor_fock_quadrature(kFigureParams, n, t, t + tau, quad)));
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst_oracle <= 1e-9 && worst_quad <= 1e-6 && elapsed < 30.0,
          fmt::format("oracle {:.2e} (tol 1e-9), quadrature {:.2e} (tol 1e-6), {:.2f} s (limit 30 s)",
                      worst_oracle, worst_quad, elapsed)};
}

// 5. Coherent overlap formula vs Poisson mixture of sectors, beta0 = sqrt(10), cutoff 120.
Outcome coherent_vs_oracle() {
  const cplx beta0{std::sqrt(10.0), 0.0};
  const SectorOracle oracle = SectorOracle::up_to(kFigureParams, 120);
  double worst = 0.0;
  double tail = 0.0;
  for (double t : {0.0, 10.0}) {
    for (double tau : kTauGrid) {
      const auto reference = oracle.coherent(beta0, t, t + tau, 120);
      tail = std::max(tail, reference.tail_bound);
      worst = std::max(worst, std::abs(decoherence_factor_coherent(kFigureParams, beta0, t, t + tau) -
                                       reference.value));
    }
  }
  return {worst <= 1e-6, fmt::format("max |d| = {:.2e} (tol 1e-6), Poisson tail {:.1e}", worst, tail)};
}

ApparatusState preparation(bool coherent, std::uint64_t n) {
  if (coherent) return coherent_with_mean_number(static_cast<double>(n));
  return FockState{n};
}

std::optional<double> tau_d(bool coherent, std::uint64_t n, double t) {
  return decoherence_time(kFigureParams, preparation(coherent, n), t);
}

// 6. tau_d(1e4) < tau_d(1e2) < tau_d(10), both preparations, t in {0, 10}.
Outcome faster_with_larger_n() {
  bool ok = true;
  std::string detail;
  for (bool coherent : {true, false}) {
    for (double t : {0.0, 10.0}) {
      const auto a = tau_d(coherent, 10, t);
      const auto b = tau_d(coherent, 100, t);
      const auto c = tau_d(coherent, 10000, t);
      const bool row = a && b && c && *c < *b && *b < *a;
      ok = ok && row;
      detail += fmt::format("{}{} t={}: {:.5f} > {:.5f} > {:.5f}", detail.empty() ? "" : "; ",
                            coherent ? "coherent" : "fock", t, a.value_or(NAN), b.value_or(NAN),
                            c.value_or(NAN));
    }
  }
  return {ok, detail};
}

// 7. |tau_d(t=10) - tau_d(t=0)| / tau_d(t=0) <= 0.25, coherent.
Outcome rate_independent_of_t() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t n : {10u, 100u, 10000u}) {
    const auto a = tau_d(true, n, 0.0);
    const auto b = tau_d(true, n, 10.0);
    const double rel = a && b ? std::abs(*b - *a) / *a : INFINITY;
    ok = ok && rel <= 0.25;
    detail += fmt::format("{}N={}: {:.2e}", detail.empty() ? "" : ", ", n, rel);
  }
  return {ok, detail + " (tol 0.25)"};
}

// 8. N = 1e4: | |F_fock| - |F_coherent| | <= 0.05 for tau in [0, 2 tau_d].
double classical_limit_gap(double t) {
  constexpr std::uint64_t n = 10000;
  const double window = 2.0 * std::max(tau_d(true, n, t).value(), tau_d(false, n, t).value());
  double worst = 0.0;
  for (double tau : uniform_grid(0.0, window, 2001)) {
    const double fock = std::abs(decoherence_factor_fock_closed(kFigureParams, n, t, t + tau));
    const double coherent = std::abs(
        decoherence_factor_coherent(kFigureParams, std::sqrt(double(n)), t, t + tau));
    worst = std::max(worst, std::abs(fock - coherent));
  }
  return worst;
}

Outcome same_classical_limit() {
  const double gap = classical_limit_gap(0.0);
  return {gap <= 0.05, fmt::format("t=0: max gap {:.2e} (tol 0.05)", gap)};
}

// 9. Free fringe: g2_free = 1/2 + cos(tau)/2 = |Psi|^2.
Outcome free_fringe() {
  const cplx c{1.0 / std::numbers::sqrt2, 0.0};
  double worst = 0.0;
  for (double tau : uniform_grid(0.0, 4.0 * std::numbers::pi, 100)) {
    const double g = g2_free(c, c, 1.0, 0.0, 0.0, tau);
    worst = std::max(worst, std::abs(g - (0.5 + 0.5 * std::cos(tau))));
    worst = std::max(worst, std::abs(g - std::norm(two_time_amplitude(c, c, 1.0, 0.0, 0.0, tau))));
  }
  return {worst <= 1e-12, fmt::format("max |d| = {:.2e} (tol 1e-12)", worst)};
}

// 10. `soqd figure` for all 12 panels < 10 s, CSVs byte-identical to the golden set.
Outcome figure_determinism() {
  const auto out = std::filesystem::temp_directory_path() / "soqd_acceptance_figures";
  std::filesystem::remove_all(out);
  const auto start = Clock::now();
  for (const FigurePanel& panel : all_figure_panels()) {
    const std::string cmd = fmt::format("\"{}\" figure --id {} --panel {} --out \"{}\" > /dev/null",
                                        SOQD_EXE, panel.figure, panel.panel, out.string());
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
  }
  const double elapsed = seconds_since(start);

  std::vector<std::string> mismatched;
  for (const FigurePanel& panel : all_figure_panels()) {
    const auto read = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      return in ? s.str() : std::string("<missing>");
    };
    const std::string name = panel.name() + ".csv";
    if (read(out / name) != read(std::filesystem::path(SOQD_GOLDEN_DIR) / name)) {
      mismatched.push_back(name);
    }
  }
  std::string detail = fmt::format("12 panels in {:.2f} s (limit 10 s), ", elapsed);
  detail += mismatched.empty() ? "all CSVs match golden" : fmt::format("{} mismatched", mismatched.size());
  return {elapsed < 10.0 && mismatched.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 closed form vs ODE", closed_form_vs_ode},
      {"2 unitarity", unitarity_suite},
      {"3 telescoping identities", telescoping},
      {"4 triple-method agreement (Fock)", triple_agreement},
      {"5 coherent closed form vs sector oracle", coherent_vs_oracle},
      {"6 faster decoherence with larger N", faster_with_larger_n},
      {"7 decoherence rate independent of t", rate_independent_of_t},
      {"8 Fock/coherent classical limit", same_classical_limit},
      {"9 free-field fringe", free_fringe},
      {"10 figure reproduction determinism", figure_determinism},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failures;
    std::cout << fmt::format("[{}] AC{}: {}\n", outcome.passed ? "PASS" : "FAIL", name,
                             outcome.detail);
  }
  // Reported for reference, not gated: the reference time is not fixed by criterion 8.
  std::cout << fmt::format("[INFO] AC8 at t=10: max gap {:.2e}\n", classical_limit_gap(10.0));
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
