#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wassest/dual_solver.hpp"
#include "wassest/estimator.hpp"
#include "wassest/io.hpp"
#include "wassest/oracle.hpp"
#include "wassest/sat_reduction.hpp"

namespace py = pybind11;
using namespace wassest;

namespace {

Instance make_instance(const std::vector<std::tuple<Point, Point, double>>& boxes, std::vector<Point> samples,
                       std::optional<std::vector<double>> demands) {
  if (boxes.empty()) throw InvalidInput("at least one box is required");
  std::vector<WeightedBox> wb;
  for (const auto& [lo, hi, w] : boxes) wb.push_back({Hyperrectangle(lo, hi), w});
  const std::size_t l = std::get<0>(boxes.front()).size();
  SampleSet s = demands ? SampleSet(std::move(samples), std::move(*demands)) : SampleSet(std::move(samples));
  return Instance(BoxDensity(l, std::move(wb)), std::move(s));
}

SolverConfig make_config(double epsilon, double eta, std::uint64_t seed, std::optional<std::uint64_t> max_iters,
                         const std::string& backend, unsigned threads) {
  SolverConfig cfg;
  cfg.epsilon = epsilon;
  cfg.eta = eta;
  cfg.seed = seed;
  cfg.max_iters = max_iters;
  cfg.backend = parse_backend(backend);
  cfg.threads = threads;
  return cfg;
}

std::vector<double> weights_of(const DualWeights& w) { return {w.values().begin(), w.values().end()}; }

CnfFormula cnf_from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

}  // namespace

PYBIND11_MODULE(_wassest, m) {
  m.doc() = "Shape estimation for box-uniform densities via semidiscrete optimal transport";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<SolverAbort>(m, "SolverAbort", PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("boxes"), py::arg("samples"), py::arg("demands") = py::none(),
           "boxes: list of (lo, hi, weight)")
      .def_property_readonly("dimension", &Instance::dimension)
      .def_property_readonly("num_samples", &Instance::num_samples)
      .def_property_readonly("num_boxes", &Instance::num_boxes)
      .def_property_readonly("samples", [](const Instance& i) { return i.samples.points(); })
      .def_property_readonly("demands", [](const Instance& i) { return i.samples.demands(); })
      .def_property_readonly("boxes", [](const Instance& i) {
        std::vector<std::tuple<Point, Point, double>> out;
        for (const auto& wb : i.density.boxes()) out.emplace_back(wb.box.lo, wb.box.hi, wb.weight);
        return out;
      });

  m.def("parse_instance", [](const std::string& text) { return parse_instance_json(text).instance; });
  m.def("load_instance", [](const std::string& path) { return read_instance_file(path).instance; });
  m.def("dump_instance", [](const Instance& inst, bool explicit_demands, const std::string& name) {
    InstanceFile f;
    f.instance = inst;
    f.explicit_demands = explicit_demands;
    f.name = name;
    return serialize_instance(f);
  }, py::arg("instance"), py::arg("explicit_demands") = false, py::arg("name") = "");

  m.def("estimate", [](const Instance& inst, double epsilon, double eta, std::uint64_t seed,
                       std::optional<std::uint64_t> max_iters, const std::string& backend, unsigned threads) {
    const SolverConfig cfg = make_config(epsilon, eta, seed, max_iters, backend, threads);
    EstimationResult r;
    {
      py::gil_scoped_release nogil;
      r = estimate_parameters(inst, cfg);
    }
    py::dict d;
    d["sigma_hat"] = r.sigma_hat;
    d["mu_hat"] = r.mu_hat;
    d["rho"] = r.rho;
    d["dual_energy"] = r.dual_energy;
    d["guarantee_holds"] = r.guarantee_holds;
    d["iterations"] = r.iterations;
    d["epsilon_prime"] = r.trace.epsilon_prime;
    d["stop_reason"] = std::string(to_string(r.trace.stop_reason));
    d["weights"] = weights_of(r.weights);
    d["warnings"] = r.warnings;
    return d;
  }, py::arg("instance"), py::arg("epsilon") = 0.05, py::arg("eta") = 0.01, py::arg("seed") = 0,
     py::arg("max_iters") = py::none(), py::arg("backend") = "auto", py::arg("threads") = 1);

  m.def("solve_dual", [](const Instance& inst, double epsilon, double eta, std::uint64_t seed,
                         std::optional<std::uint64_t> max_iters, const std::string& backend) {
    const auto s = solve_dual(inst, make_config(epsilon, eta, seed, max_iters, backend, 1));
    return py::make_tuple(weights_of(s.weights), s.energy, s.trace.iterates.size());
  }, py::arg("instance"), py::arg("epsilon") = 0.05, py::arg("eta") = 0.01, py::arg("seed") = 0,
     py::arg("max_iters") = py::none(), py::arg("backend") = "auto");

  m.def("energy", [](const Instance& i, const std::vector<double>& g) { return energy_exact(i, g); });
  m.def("gradient", [](const Instance& i, const std::vector<double>& g) { return gradient_exact(i, g); });
  m.def("smoothness_constant", &smoothness_constant);
  m.def("epsilon_prime", &epsilon_prime);

  m.def("transport_cost_1d", [](const Instance& i) { return semidiscrete_1d_exact(i).cost; });
  m.def("discrete_transport_cost", [](const Instance& i, std::size_t res) {
    const auto r = discrete_transport_cost(i, res);
    return py::make_tuple(r.cost, r.error_bound);
  }, py::arg("instance"), py::arg("resolution") = 200);

  m.def("reduce_3sat", [](const std::string& dimacs) {
    const auto red = reduce_3sat(cnf_from_text(dimacs));
    return py::make_tuple(Instance(red.density, red.samples), red.gamma);
  }, "DIMACS text -> (instance, gamma)");
  m.def("decide_positive_likelihood", [](const std::string& d) { return decide_positive_likelihood(cnf_from_text(d)); });
  m.def("brute_force_sat", [](const std::string& d) { return brute_force_sat(cnf_from_text(d)); });
}
