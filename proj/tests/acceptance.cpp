// Acceptance suite: one PASS/FAIL line per criterion, with wall time. Exit status is the number
// of failed criteria (capped at 1 for ctest).

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "nhssh/analysis.hpp"
#include "nhssh/eigensolver.hpp"
#include "nhssh/symmetry.hpp"

using namespace nhssh;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += " [over the " + std::to_string(int(budget_s)) + " s budget]";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

double max_abs_im(const ComplexSpectrum& s) {
  double m = 0.0;
  for (auto e : s.eigenvalues) m = std::max(m, std::abs(e.imag()));
  return m;
}

const SolveOptions kValues{.workers = 0, .strip_cells = 2, .vectors = false};

// --- CLI helpers --------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string("'") + NHSSH_CLI + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

}  // namespace

int main() {
  criterion(1, "Hermitian-limit reality", 10, [] {
    double worst = 0.0;
    std::string detail;
    for (auto [bx, by] : {std::pair{Boundary::Periodic, Boundary::Periodic}, {Boundary::Open, Boundary::Periodic},
                          {Boundary::Periodic, Boundary::Open}, {Boundary::Open, Boundary::Open}}) {
      const double m = max_abs_im(full_spectrum(hermitian_params(), {16, 16, bx, by}, kValues));
      worst = std::max(worst, m);
      detail += boundary_tag(bx, by) + " " + num(m) + "  ";
    }
    return Outcome{worst < 1e-10, detail};
  });

  criterion(2, "Bloch / real-space oracle", 1, [] {
    const auto p = reference_params(beta_potential(0.8));
    const auto real = full_spectrum(p, {4, 4, Boundary::Periodic, Boundary::Periodic}, kValues);
    const auto bloch = bloch_spectrum(p, {4, 4}, kValues);
    const double d = gen::multiset_distance(real.eigenvalues, bloch.eigenvalues);
    return Outcome{real.size() == 64 && d < 1e-8, "paired distance " + num(d)};
  });

  criterion(3, "symmetry suite", 0, [] {
    const std::vector<std::string> tested{"P", "T", "RMx", "RMy", "C4", "S", "RMxS", "RMyS", "RMxC4", "RMyC4"};
    auto kept = [&](const ModelParams& p) {
      std::set<std::string> out;
      for (const auto& n : tested)
        if (check_symmetry(p, ops::by_name(n), {32, 32}).verdict == Verdict::Preserved) out.insert(n);
      return out;
    };
    double worst = 0.0;
    for (const auto& op : ops::builtins()) worst = std::max(worst, check_symmetry(reference_params(), op).residual);
    const auto a = kept(reference_params(alpha_potential(0.4)));
    const auto b = kept(reference_params(beta_potential(0.4)));
    const bool ok = worst < 1e-10 && a == std::set<std::string>{"P", "T", "RMxS", "RMyS", "RMxC4", "RMyC4"} &&
                    b == std::set<std::string>{"RMy", "T", "RMxS"};
    std::string as, bs;
    for (const auto& s : a) as += s + " ";
    for (const auto& s : b) bs += s + " ";
    return Outcome{ok, "bare residual " + num(worst) + "; alpha keeps " + as + "; beta keeps " + bs};
  });

  criterion(4, "PBC reality switch", 30, [] {
    const std::vector<double> alphas{0.0, 0.2, 0.4, 0.6};
    const auto c = pt_transition_scan(reference_params(), alphas, {.grid = {64, 64}, .tol = 1e-8, .resolution = 1e-3});
    std::string detail;
    bool ok = true;
    for (std::size_t i = 0; i < 4; ++i) {
      const double f = c.samples[i].reports[0].fraction_real;
      detail += "f(" + num(alphas[i]) + ")=" + num(f) + " ";
      ok = ok && (i < 2 ? f < 1.0 : f == 1.0);
    }
    ok = ok && c.detected_transition && *c.detected_transition > 0.2 && *c.detected_transition < 0.4;
    if (c.detected_transition) detail += "transition " + num(*c.detected_transition);
    return Outcome{ok, detail};
  });

  criterion(5, "alpha = 0 cross structure", 0, [] {
    const auto s = bloch_spectrum(reference_params(), {64, 64}, kValues);
    double worst = 0.0;
    for (auto e : s.eigenvalues) worst = std::max(worst, std::min(std::abs(e.real()), std::abs(e.imag())));
    return Outcome{worst < 1e-8, "max min(|Re|,|Im|) = " + num(worst)};
  });

  criterion(6, "OBC reality switch", 180, [] {
    const std::vector<std::pair<int, int>> sizes{{12, 12}, {16, 16}, {20, 20}, {24, 24}};
    const auto r = finite_size_scaling(reference_params(beta_potential(0.8)), sizes);
    std::string detail;
    for (const auto& s : r.curve.samples) detail += num(s.value) + ":" + num(s.reports[0].max_abs_im) + " ";
    const double at20 = r.curve.samples[2].reports[0].max_abs_im;
    return Outcome{at20 <= 5e-3 && r.monotone_decreasing, detail};
  });

  criterion(7, "directional winding", 0, [] {
    const auto p = reference_params(beta_potential(0.8));
    const auto x = winding_survey(p, Axis::X, 20, 512, 1);
    const auto y = winding_survey(p, Axis::Y, 20, 512, 1);
    const bool ok = x.random.size() == 20 && x.random_nonzero == 0 && y.grid_nonzero > 0;
    std::string detail = "x: " + std::to_string(x.random_nonzero) + "/" + std::to_string(x.random.size()) +
                         " nonzero; y grid: " + std::to_string(y.grid_nonzero) + "/" + std::to_string(y.grid_points);
    if (y.grid_example) detail += " (w=" + std::to_string(y.grid_example->winding) + ")";
    return Outcome{ok, detail};
  });

  criterion(8, "GBZ modular condition", 120, [] {
    const auto p = reference_params(beta_potential(0.8));
    bool ok = true;
    std::string detail;
    for (double kx : {0.0, pi / 2, pi}) {
      const auto g = gbz_ribbon_survey(p, kx, 200);
      ok = ok && g.fraction >= 0.9;
      detail += "kx=" + num(kx) + ": " + std::to_string(g.satisfied) + "/" + std::to_string(g.bulk) + "  ";
    }
    double herm = 0.0;
    for (double kx : {0.0, 1.0, 2.5})
      for (double ky : {0.3, 1.7}) {
        const auto e = build_bloch(hermitian_params(), kx, ky).eigenvalues();
        for (int b = 0; b < 4; ++b) {
          const auto g = gbz_condition_check(hermitian_params(), kx, e(b).real());
          herm = std::max({herm, std::abs(g.root_moduli[1] - 1.0), std::abs(g.root_moduli[2] - 1.0)});
        }
      }
    detail += "Hermitian | |beta|-1 | " + num(herm);
    return Outcome{ok && herm < 1e-8, detail};
  });

  criterion(9, "theta transition", 0, [] {
    std::vector<double> thetas;
    for (int i = 1; i <= 9; ++i) thetas.push_back(0.05 * i * pi);
    const auto c = theta_scan(0.8, thetas, ThetaVariant::ZZero);
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < thetas.size(); ++i)
      if (std::abs(thetas[i] - 0.25 * pi) < std::abs(thetas[nearest] - 0.25 * pi)) nearest = i;
    bool all_complex = true;
    for (const auto& s : c.samples) all_complex = all_complex && s.reports[0].fraction_real < 1.0;
    const double at15 = c.samples[2].reports[1].max_abs_im, at45 = c.samples[8].reports[1].max_abs_im;
    const bool ok = c.detected_transition && *c.detected_transition == thetas[nearest] && at45 <= 0.1 * at15 &&
                    all_complex;
    return Outcome{ok, "gap minimum at " + num(*c.detected_transition / pi) + " pi; xyOBC 0.15pi " + num(at15) +
                           ", 0.45pi " + num(at45) + (all_complex ? "; PBC complex throughout" : "; PBC real somewhere")};
  });

  criterion(10, "on-site pattern", 0, [] {
    const auto q = onsite_pattern(theta_potential(0.8, 0.0)).describe();
    const auto a = onsite_pattern(theta_potential(0.8, pi / 4, ThetaVariant::ZZero)).describe();
    const auto b = onsite_pattern(theta_potential(0.8, pi / 4, ThetaVariant::ZZ)).describe();
    return Outcome{q == "balanced-quadrupole" && a == "vanishing-pair(B,C)" && b == "vanishing-pair(C,D)",
                   q + ", " + a + ", " + b};
  });

  criterion(11, "solver integrity", 0, [] {
    gen::Rng rng(20240611);
    double trace = 0.0, residual = 0.0, similarity = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
      const auto p = gen::params(rng);
      const auto l = gen::lattice(rng, 10);
      const MatrixXcd h = build_real_space(p, l);
      const auto s = full_spectrum(p, l, {.workers = 0, .strip_cells = 1, .vectors = true});
      cplx sum = 0.0;
      for (auto e : s.eigenvalues) sum += e;
      trace = std::max(trace, std::abs(sum - h.trace()) / std::max(std::abs(h.trace()), h.norm()));
      residual = std::max(residual, s.max_residual);
      const MatrixXcd v = gen::similarity(rng, h.rows());
      const auto moved = eigen_decompose(v * h * v.inverse()).values;
      similarity = std::max(similarity, gen::multiset_distance(s.eigenvalues, {moved.data(), moved.data() + moved.size()}));
    }
    return Outcome{trace < 1e-8 && residual < 1e-8 && similarity < 1e-6,
                   "trace " + num(trace) + ", residual " + num(residual) + ", similarity " + num(similarity)};
  });

  criterion(12, "CLI contract", 0, [] {
    const fs::path root = fs::path(NHSSH_SCRATCH) / "acceptance";
    fs::remove_all(root);
    const std::string fx = NHSSH_FIXTURES;
    const auto out = [&](const std::string& n) { return (root / n).string(); };
    std::string detail;
    bool ok = true;

    std::map<int, bool> seen;
    seen[0] = cli("spectrum --config " + fx + "/hermitian.toml --out " + out("ok")) == 0;
    seen[1] = cli("spectrum --config " + fx + "/failing_assertion.toml --out " + out("fail")) == 1;
    seen[2] = cli("spectrum --config " + fx + "/unknown_key.toml --out " + out("cfg")) == 2 &&
              cli("spectrum --config " + fx + "/bad_value.toml --out " + out("cfg")) == 2;
    seen[3] = cli("spectrum --config " + fx + "/nan_hopping.toml --out " + out("nan")) == 3;
    for (auto [code, hit] : seen) {
      ok = ok && hit;
      detail += "exit " + std::to_string(code) + (hit ? " ok, " : " WRONG, ");
    }

    const std::string args = "spectrum --config " + fx + "/beta_small.toml --out " + out("det");
    const bool ran = cli(args) == 0;
    const auto first = snapshot(root / "det");
    const bool same = ran && cli(args) == 0 && snapshot(root / "det") == first;
    detail += same ? "re-run identical, " : "re-run DIFFERS, ";

    fs::copy_file(root / "det" / "config.json", root / "echo.json");
    fs::remove_all(root / "det");
    const bool echo = cli("spectrum --config " + out("echo.json")) == 0 && snapshot(root / "det") == first;
    detail += echo ? "echoed config reproduces" : "echoed config DIFFERS";
    return Outcome{ok && same && echo, detail};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
