#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "wassest/dual_solver.hpp"
#include "wassest/estimator.hpp"
#include "wassest/types.hpp"

namespace wassest {

/// On-disk instance: {dimension, boxes[{lo,hi,weight}], samples[{point, demand?}],
/// metadata{name, seed?}}. Remembers whether demands were written so that
/// parse -> serialize reproduces the input.
struct InstanceFile {
  Instance instance;
  bool explicit_demands = false;
  std::string name;
  std::optional<std::uint64_t> seed;
};

InstanceFile parse_instance_json(const std::string& text);
InstanceFile read_instance_file(const std::string& path);
std::string serialize_instance(const InstanceFile& file);
void write_text_file(const std::string& path, const std::string& text);

std::string serialize_result(const EstimationResult& result);

/// t,grad_norm,energy_estimate,wallclock_ms
void write_trace_csv(std::ostream& out, const SolverTrace& trace);

}  // namespace wassest
