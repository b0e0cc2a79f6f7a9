#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "wassest/types.hpp"

namespace wassest {

struct Literal {
  std::size_t var = 0;  // 0-based variable index
  bool positive = true;

  bool operator==(const Literal&) const = default;
};

using Clause = std::array<Literal, 3>;

/// 3-CNF formula in which every clause has three distinct variables and every
/// variable occurs somewhere.
class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(std::size_t num_vars, std::vector<Clause> clauses);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  bool satisfied_by(const std::vector<bool>& assignment) const;

 private:
  std::size_t num_vars_ = 0;
  std::vector<Clause> clauses_;
};

/// DIMACS CNF ("p cnf V C", 0-terminated clauses, 'c' comments). Rejects
/// clauses that do not have exactly three distinct variables.
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs_file(const std::string& path);
std::string to_dimacs(const CnfFormula& cnf);

/// Half-width of the gadget intervals.
inline constexpr double kGadgetEpsilon = 1.0 / 80.0;

/// The MLE instance built from a formula: one sample per clause and seven
/// gadget boxes per clause, one for each satisfying assignment of its variables.
struct ReductionOutput {
  SampleSet samples;
  BoxDensity density;
  double gamma = 0.0;
  double epsilon_gadget = kGadgetEpsilon;
  std::vector<std::size_t> box_clause;  // clause index of every box
};

/// Samples y_ℓ carry ℓ (1-based clause number) on the clause's variables and 0
/// elsewhere. Box coordinates: [0, 0.5] off the clause, [ℓ + 0.5 ± ε] for a
/// true variable, [ℓ ± ε] for a false one. Boxes are ordered by clause, then by
/// truth-table row of the clause variables (ascending index, first variable
/// most significant, 0 = false), skipping the falsifying row.
ReductionOutput reduce_3sat(const CnfFormula& cnf);

/// θ̄_j = -0.5 for a true variable, 0 for a false one.
Point assignment_to_theta(const std::vector<bool>& assignment);

/// f0(y_ℓ - θ) > 0 for every sample, i.e. each shifted sample lies in some box.
bool likelihood_positive(const ReductionOutput& reduction, PointView theta);

inline constexpr std::size_t kMaxEnumerationVars = 20;

/// Searches the 2^l canonical θ̄ for a positive likelihood.
bool decide_positive_likelihood(const CnfFormula& cnf);

/// Truth-table satisfiability check.
bool brute_force_sat(const CnfFormula& cnf);

/// Random 3-CNF over exactly num_vars variables (every variable used). Needs
/// 3 * num_clauses >= num_vars.
CnfFormula random_cnf(std::size_t num_vars, std::size_t num_clauses, std::uint64_t seed);

}  // namespace wassest
