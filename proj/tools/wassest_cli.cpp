// wassest: estimate shift/scale by semidiscrete transport, build the 3-SAT
// gadget instance, and run the verification suites.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wassest/dual_solver.hpp"
#include "wassest/estimator.hpp"
#include "wassest/fixtures.hpp"
#include "wassest/geometry.hpp"
#include "wassest/io.hpp"
#include "wassest/oracle.hpp"
#include "wassest/sat_reduction.hpp"

namespace {

using namespace wassest;

enum Exit { kOk = 0, kCheckFailed = 1, kBadInput = 2, kAbort = 3 };

std::uint64_t default_seed() {
  if (const char* env = std::getenv("WASSEST_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric WASSEST_SEED\n";
    }
  }
  return 0;
}

struct EstimateArgs {
  std::string instance;
  double epsilon = 0.05;
  double eta = 0.01;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_iters;
  std::string backend = "auto";
  std::string out;
  std::string trace;
  std::uint64_t max_draws = 0;
  unsigned threads = 1;
};

int run_estimate(const EstimateArgs& a) {
  const InstanceFile file = read_instance_file(a.instance);
  SolverConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.eta = a.eta;
  cfg.seed = a.seed;
  cfg.max_iters = a.max_iters;
  cfg.backend = parse_backend(a.backend);
  cfg.max_draws_per_box = a.max_draws;
  cfg.threads = a.threads;
  cfg.trace_energy = !a.trace.empty();
  const EstimationResult r = estimate_parameters(file.instance, cfg);

  const std::string json = serialize_result(r);
  if (a.out.empty()) {
    std::cout << json;
  } else {
    write_text_file(a.out, json);
  }
  if (!a.trace.empty()) {
    std::ofstream csv(a.trace);
    if (!csv) throw std::runtime_error("cannot write " + a.trace);
    write_trace_csv(csv, r.trace);
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

int run_reduce(const std::string& dimacs, const std::string& out) {
  const CnfFormula cnf = parse_dimacs_file(dimacs);
  const ReductionOutput red = reduce_3sat(cnf);
  InstanceFile file;
  file.instance = Instance(red.density, red.samples);
  file.name = "3sat-gadget:" + dimacs;
  const std::string json = serialize_instance(file);
  if (out.empty()) {
    std::cout << json;
  } else {
    write_text_file(out, json);
  }
  std::cerr << std::setprecision(12) << "gamma " << red.gamma << '\n'
            << "boxes " << red.density.size() << '\n';
  return kOk;
}

struct VerifyArgs {
  std::string path;
  std::string mode = "oracle";
  std::size_t resolution = 200;
  std::uint64_t seed = 0;
  std::string family;
  std::string csv;
  double epsilon = 0.05;
  std::optional<std::uint64_t> max_iters;
};

int verify_oracle(const VerifyArgs& a) {
  const Instance inst = read_instance_file(a.path).instance;
  SolverConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.seed = a.seed;
  cfg.max_iters = a.max_iters;
  const DualSolution sol = solve_dual(inst, cfg);

  double p_star = 0.0, slack = 0.0;
  std::string oracle;
  if (inst.dimension() == 1) {
    p_star = semidiscrete_1d_exact(inst).cost;
    oracle = "1d-quantile";
  } else {
    const auto d = discrete_transport_cost(inst, a.resolution);
    p_star = d.cost;
    slack = d.error_bound;
    oracle = "discrete@" + std::to_string(a.resolution);
  }
  const double gap = std::abs(sol.energy - p_star);
  const double tol = sol.trace.epsilon_prime + slack;
  const bool ok = gap <= tol;
  std::cout << std::setprecision(10) << "oracle " << oracle << "\nenergy " << sol.energy
            << "\np_star " << p_star << "\n|E-p*| " << gap << "\nepsilon_prime "
            << sol.trace.epsilon_prime << "\ndiscretization_error " << slack << "\niterations "
            << sol.trace.stop_step << '\n'
            << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kCheckFailed;
}

int verify_sat(const VerifyArgs& a) {
  const CnfFormula cnf = parse_dimacs_file(a.path);
  const bool via_likelihood = decide_positive_likelihood(cnf);
  const bool sat = brute_force_sat(cnf);
  std::cout << "likelihood_positive " << std::boolalpha << via_likelihood << "\nsatisfiable " << sat
            << '\n'
            << (via_likelihood == sat ? "PASS" : "FAIL") << '\n';
  return via_likelihood == sat ? kOk : kCheckFailed;
}

int verify_family(const VerifyArgs& a) {
  std::ostringstream table;
  table << "m,ratio,ratio_over_m\n" << std::setprecision(12);
  bool ok = true;
  double base = 0.0;
  for (double m : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const Instance inst = a.family == "separation" ? fixtures::close_samples(m) : fixtures::thin_box(m);
    const double r = fixtures::family_ratio(inst, m);
    if (m == 1.0) base = r;
    const double growth = r / base;
    ok = ok && growth >= 0.5 * m && growth <= 2.0 * m;
    table << m << ',' << r << ',' << r / m << '\n';
  }
  if (a.csv.empty()) {
    std::cout << table.str();
  } else {
    write_text_file(a.csv, table.str());
  }
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kCheckFailed;
}

// Partition, gradient, smoothness and boundedness checks on one instance.
int verify_invariants(const VerifyArgs& a) {
  const Instance inst = read_instance_file(a.path).instance;
  const std::size_t n = inst.num_samples();
  const InstanceStats st = compute_stats(inst);
  const double L = smoothness_constant(inst);
  Rng rng(a.seed);
  const double spread = 2.0 * st.max_norm * st.max_norm;
  auto random_g = [&] {
    std::vector<double> g(n);
    for (double& v : g) v = rng.uniform(-spread, spread);
    project_zero_sum(g);
    return g;
  };
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
    if (!ok) ++failures;
  };

  double worst_partition = 0.0;
  double worst_fd = 0.0;
  double worst_smooth = 0.0;
  const bool exact = inst.dimension() <= 3;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_g();
    if (exact) {
      for (const auto& wb : inst.density.boxes()) {
        double total = 0.0;
        for (const auto& c : cell_box_integrals_exact(inst.samples, g, wb.box)) total += c.volume;
        worst_partition = std::max(worst_partition, std::abs(total - wb.box.volume()) / wb.box.volume());
      }
      const auto fd = finite_difference_gradient(inst, g, 1e-5);
      const auto an = gradient_exact(inst, g);
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        num += (fd[j] - an[j]) * (fd[j] - an[j]);
        den += an[j] * an[j];
      }
      if (den > 1e-12) worst_fd = std::max(worst_fd, std::sqrt(num / den));
      for (int p = 0; p < 5; ++p) {
        const auto h = random_g();
        worst_smooth = std::max(worst_smooth, fixtures::gradient_lipschitz_ratio(inst, g, h));
      }
    }
  }
  std::ostringstream d;
  d << std::setprecision(6);
  if (exact) {
    d << "max_rel_error=" << worst_partition;
    report("cells-partition-boxes", worst_partition <= 1e-9, d.str());
    d.str("");
    d << "max_rel_error=" << worst_fd;
    report("finite-difference-gradient", worst_fd <= 1e-3, d.str());
    d.str("");
    d << "max_ratio=" << worst_smooth << " L=" << L;
    report("gradient-lipschitz", worst_smooth <= L, d.str());
  } else {
    std::cout << "SKIP exact-volume checks (dimension " << inst.dimension() << " > 3)\n";
  }

  SolverConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.seed = a.seed;
  cfg.max_iters = a.max_iters;
  const DualSolution sol = solve_dual(inst, cfg);
  d.str("");
  d << "violations=" << sol.trace.sup_norm_violations << " bound=" << 20.0 * n * st.max_norm * st.max_norm;
  report("iterate-sup-norm", sol.trace.sup_norm_violations == 0, d.str());
  d.str("");
  d << "gap=" << sol.weights.max_pairwise_gap() << " bound=" << 16.0 * n * st.max_norm * st.max_norm;
  report("final-pairwise-gap", !sol.trace.final_gap_violation, d.str());
  d.str("");
  const double eps_prime = epsilon_prime(inst, a.epsilon);
  d << "epsilon_prime=" << eps_prime << " floor=" << a.epsilon * st.min_scale * st.min_scale / 12.0;
  report("epsilon-prime-floor", eps_prime >= a.epsilon * st.min_scale * st.min_scale / 12.0, d.str());
  return failures == 0 ? kOk : kCheckFailed;
}

int run_verify(const VerifyArgs& a) {
  if (a.mode == "invariants" && !a.family.empty()) return verify_family(a);
  if (a.path.empty()) throw InvalidInput("verify: an input path is required for mode " + a.mode);
  if (a.mode == "oracle") return verify_oracle(a);
  if (a.mode == "sat") return verify_sat(a);
  return verify_invariants(a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift/scale estimation by semidiscrete optimal transport"};
  app.require_subcommand(1);
  const std::uint64_t env_seed = default_seed();

  EstimateArgs est;
  est.seed = env_seed;
  auto* estimate = app.add_subcommand("estimate", "Estimate sigma and mu for an instance file");
  estimate->add_option("instance", est.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  estimate->add_option("--epsilon", est.epsilon, "Target accuracy in (0,1)")->capture_default_str();
  estimate->add_option("--eta", est.eta, "Failure probability in (0,1)")->capture_default_str();
  estimate->add_option("--seed", est.seed, "Random seed (default: $WASSEST_SEED or 0)");
  estimate->add_option("--max-iters", est.max_iters, "Iteration override; below M voids the guarantee");
  estimate->add_option("--backend", est.backend, "Volume backend")
      ->check(CLI::IsMember({"auto", "mc", "exact"}))
      ->capture_default_str();
  estimate->add_option("--max-draws", est.max_draws, "Cap on Monte-Carlo draws per box (0 = none)");
  estimate->add_option("--threads", est.threads, "Worker threads for Monte-Carlo sampling");
  estimate->add_option("--out", est.out, "Result JSON path (default: stdout)");
  estimate->add_option("--trace", est.trace, "Trace CSV path");

  std::string dimacs, reduce_out;
  auto* reduce = app.add_subcommand("reduce-3sat", "Build the gadget instance of a 3-CNF formula");
  reduce->add_option("dimacs", dimacs, "DIMACS CNF")->required()->check(CLI::ExistingFile);
  reduce->add_option("--out", reduce_out, "Instance JSON path (default: stdout)");

  VerifyArgs ver;
  ver.seed = env_seed;
  auto* verify = app.add_subcommand("verify", "Run oracle, SAT or invariant checks");
  verify->add_option("path", ver.path, "Instance JSON or DIMACS file");
  verify->add_option("--mode", ver.mode)->check(CLI::IsMember({"oracle", "sat", "invariants"}))->capture_default_str();
  verify->add_option("--resolution", ver.resolution, "Cells per axis for discrete transport")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--seed", ver.seed, "Random seed (default: $WASSEST_SEED or 0)");
  verify->add_option("--family", ver.family, "Lipschitz blow-up family")
      ->check(CLI::IsMember({"separation", "thin-box"}));
  verify->add_option("--csv", ver.csv, "Write the ratio table here instead of stdout");
  verify->add_option("--epsilon", ver.epsilon)->capture_default_str();
  verify->add_option("--max-iters", ver.max_iters);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*estimate) return run_estimate(est);
    if (*reduce) return run_reduce(dimacs, reduce_out);
    return run_verify(ver);
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << " (after " << e.trace().iterates.size()
              << " iterations)\n";
    return kAbort;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAbort;
  }
}
