#include "wassest/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wassest {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw InvalidInput("instance " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) schema_error(where, "unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing '") + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where, "expected a number");
  return v.get<double>();
}

Point vector_of(const json& v, const std::string& where, std::size_t dim) {
  if (!v.is_array()) schema_error(where, "expected an array");
  if (v.size() != dim) {
    schema_error(where, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
  }
  Point p;
  for (std::size_t d = 0; d < v.size(); ++d) p.push_back(number(v[d], where));
  return p;
}

ordered_json array_of(PointView p) {
  ordered_json a = ordered_json::array();
  for (double x : p) a.push_back(x);
  return a;
}

}  // namespace

InstanceFile parse_instance_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("instance: malformed JSON: ") + e.what());
  }
  check_keys(doc, "root", {"dimension", "boxes", "samples", "metadata"});
  const json& dim_v = require(doc, "root", "dimension");
  if (!dim_v.is_number_unsigned() || dim_v.get<std::size_t>() == 0) {
    schema_error("dimension", "expected a positive integer");
  }
  const auto dim = dim_v.get<std::size_t>();

  const json& boxes_v = require(doc, "root", "boxes");
  if (!boxes_v.is_array() || boxes_v.empty()) schema_error("boxes", "expected a non-empty array");
  std::vector<WeightedBox> boxes;
  for (std::size_t i = 0; i < boxes_v.size(); ++i) {
    const std::string where = "boxes[" + std::to_string(i) + "]";
    check_keys(boxes_v[i], where, {"lo", "hi", "weight"});
    WeightedBox wb;
    wb.box = Hyperrectangle(vector_of(require(boxes_v[i], where, "lo"), where + ".lo", dim),
                            vector_of(require(boxes_v[i], where, "hi"), where + ".hi", dim));
    wb.weight = number(require(boxes_v[i], where, "weight"), where + ".weight");
    boxes.push_back(std::move(wb));
  }

  const json& samples_v = require(doc, "root", "samples");
  if (!samples_v.is_array() || samples_v.empty()) schema_error("samples", "expected a non-empty array");
  std::vector<Point> points;
  std::vector<double> demands;
  std::size_t with_demand = 0;
  for (std::size_t j = 0; j < samples_v.size(); ++j) {
    const std::string where = "samples[" + std::to_string(j) + "]";
    check_keys(samples_v[j], where, {"point", "demand"});
    points.push_back(vector_of(require(samples_v[j], where, "point"), where + ".point", dim));
    if (samples_v[j].contains("demand")) {
      demands.push_back(number(samples_v[j]["demand"], where + ".demand"));
      ++with_demand;
    }
  }
  if (with_demand != 0 && with_demand != points.size()) {
    schema_error("samples", "either every sample or none carries a demand");
  }

  InstanceFile file;
  if (doc.contains("metadata")) {
    const json& meta = doc["metadata"];
    check_keys(meta, "metadata", {"name", "seed"});
    if (meta.contains("name")) {
      if (!meta["name"].is_string()) schema_error("metadata.name", "expected a string");
      file.name = meta["name"].get<std::string>();
    }
    if (meta.contains("seed")) {
      if (!meta["seed"].is_number_unsigned()) schema_error("metadata.seed", "expected an unsigned integer");
      file.seed = meta["seed"].get<std::uint64_t>();
    }
  }
  file.explicit_demands = with_demand != 0;
  SampleSet samples = file.explicit_demands ? SampleSet(std::move(points), std::move(demands))
                                            : SampleSet(std::move(points));
  file.instance = Instance(BoxDensity(dim, std::move(boxes)), std::move(samples));
  return file;
}

InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_json(buf.str());
}

std::string serialize_instance(const InstanceFile& file) {
  const Instance& inst = file.instance;
  ordered_json doc;
  doc["dimension"] = inst.dimension();
  ordered_json boxes = ordered_json::array();
  for (const auto& wb : inst.density.boxes()) {
    ordered_json b;
    b["lo"] = array_of(wb.box.lo);
    b["hi"] = array_of(wb.box.hi);
    b["weight"] = wb.weight;
    boxes.push_back(std::move(b));
  }
  doc["boxes"] = std::move(boxes);
  ordered_json samples = ordered_json::array();
  for (std::size_t j = 0; j < inst.num_samples(); ++j) {
    ordered_json s;
    s["point"] = array_of(inst.samples[j]);
    if (file.explicit_demands) s["demand"] = inst.samples.demands()[j];
    samples.push_back(std::move(s));
  }
  doc["samples"] = std::move(samples);
  ordered_json meta = ordered_json::object();
  meta["name"] = file.name;
  if (file.seed) meta["seed"] = *file.seed;
  doc["metadata"] = std::move(meta);
  return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string serialize_result(const EstimationResult& r) {
  ordered_json doc;
  doc["sigma_hat"] = r.sigma_hat;
  doc["mu_hat"] = array_of(r.mu_hat);
  doc["rho"] = r.rho;
  doc["dual_energy"] = r.dual_energy;
  doc["epsilon"] = r.epsilon;
  doc["eta"] = r.eta;
  doc["guarantee_holds"] = r.guarantee_holds;
  doc["iterations"] = r.iterations;
  doc["iteration_cap"] = r.trace.iteration_cap;
  doc["stop_reason"] = to_string(r.trace.stop_reason);
  doc["backend"] = to_string(r.trace.backend);
  doc["epsilon_prime"] = r.trace.epsilon_prime;
  doc["weights"] = array_of(r.weights.values());
  doc["warnings"] = r.warnings;
  return doc.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  out << "t,grad_norm,energy_estimate,wallclock_ms\n";
  out.precision(17);
  for (const auto& row : trace.iterates) {
    out << row.t << ',' << row.grad_norm << ',';
    if (!std::isnan(row.energy_estimate)) out << row.energy_estimate;
    out << ',' << row.wallclock_ms << '\n';
  }
}

}  // namespace wassest
