#include "wassest/sat_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wassest/rng.hpp"

namespace wassest {

CnfFormula::CnfFormula(std::size_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  if (num_vars_ == 0) throw InvalidInput("cnf: at least one variable is required");
  if (clauses_.empty()) throw InvalidInput("cnf: at least one clause is required");
  std::vector<bool> used(num_vars_, false);
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    const auto& cl = clauses_[c];
    for (std::size_t a = 0; a < 3; ++a) {
      if (cl[a].var >= num_vars_) {
        std::ostringstream msg;
        msg << "cnf: clause " << c + 1 << " references variable " << cl[a].var + 1 << " beyond "
            << num_vars_;
        throw InvalidInput(msg.str());
      }
      for (std::size_t b = a + 1; b < 3; ++b) {
        if (cl[a].var == cl[b].var) {
          std::ostringstream msg;
          msg << "cnf: clause " << c + 1 << " repeats variable " << cl[a].var + 1;
          throw InvalidInput(msg.str());
        }
      }
      used[cl[a].var] = true;
    }
  }
  for (std::size_t v = 0; v < num_vars_; ++v) {
    if (!used[v]) {
      std::ostringstream msg;
      msg << "cnf: variable " << v + 1 << " does not occur in any clause";
      throw InvalidInput(msg.str());
    }
  }
}

bool CnfFormula::satisfied_by(const std::vector<bool>& assignment) const {
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& cl) {
    return std::any_of(cl.begin(), cl.end(),
                       [&](const Literal& lit) { return assignment[lit.var] == lit.positive; });
  });
}

CnfFormula parse_dimacs(std::istream& in) {
  std::size_t declared_vars = 0;
  std::size_t declared_clauses = 0;
  bool header = false;
  std::vector<Clause> clauses;
  std::vector<long long> pending;
  std::string token;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    if (!(ls >> token)) continue;
    if (token[0] == 'c') continue;
    if (token == "%") break;
    if (token == "p") {
      std::string fmt;
      if (header || !(ls >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf") {
        throw InvalidInput("dimacs: malformed problem line " + std::to_string(line_no));
      }
      header = true;
      continue;
    }
    if (!header) throw InvalidInput("dimacs: clause before the 'p cnf' header");
    ls.clear();
    ls.seekg(0);
    long long lit = 0;
    while (ls >> token) {
      try {
        std::size_t used = 0;
        lit = std::stoll(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw InvalidInput("dimacs: bad literal '" + token + "' on line " + std::to_string(line_no));
      }
      if (lit != 0) {
        if (static_cast<std::size_t>(std::llabs(lit)) > declared_vars) {
          throw InvalidInput("dimacs: literal " + token + " exceeds the declared variable count");
        }
        pending.push_back(lit);
        continue;
      }
      const std::size_t c = clauses.size() + 1;
      if (pending.size() != 3) {
        throw InvalidInput("dimacs: clause " + std::to_string(c) + " has " +
                           std::to_string(pending.size()) + " literals, expected 3");
      }
      Clause cl;
      for (std::size_t a = 0; a < 3; ++a) {
        cl[a] = {static_cast<std::size_t>(std::llabs(pending[a])) - 1, pending[a] > 0};
      }
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
          if (cl[a].var == cl[b].var) {
            throw InvalidInput("dimacs: clause " + std::to_string(c) + " repeats variable " +
                               std::to_string(cl[a].var + 1));
          }
        }
      }
      clauses.push_back(cl);
      pending.clear();
    }
  }
  if (!header) throw InvalidInput("dimacs: missing 'p cnf' header");
  if (!pending.empty()) throw InvalidInput("dimacs: last clause is not terminated by 0");
  if (clauses.size() != declared_clauses) {
    throw InvalidInput("dimacs: header declares " + std::to_string(declared_clauses) +
                       " clauses, found " + std::to_string(clauses.size()));
  }
  return CnfFormula(declared_vars, std::move(clauses));
}

CnfFormula parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return parse_dimacs(in);
}

std::string to_dimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars() << ' ' << cnf.num_clauses() << '\n';
  for (const auto& cl : cnf.clauses()) {
    for (const auto& lit : cl) {
      out << (lit.positive ? "" : "-") << lit.var + 1 << ' ';
    }
    out << "0\n";
  }
  return out.str();
}

ReductionOutput reduce_3sat(const CnfFormula& cnf) {
  const std::size_t l = cnf.num_vars();
  const std::size_t n = cnf.num_clauses();
  const double eps = kGadgetEpsilon;

  std::vector<Point> points;
  points.reserve(n);
  std::vector<WeightedBox> boxes;
  boxes.reserve(7 * n);
  std::vector<std::size_t> owner;
  owner.reserve(7 * n);

  const double gamma = 1.0 / (7.0 * static_cast<double>(n) * std::pow(0.5, static_cast<double>(l) - 3.0) *
                              std::pow(2.0 * eps, 3.0));

  for (std::size_t c = 0; c < n; ++c) {
    const double tag = static_cast<double>(c + 1);
    Clause cl = cnf.clauses()[c];
    std::sort(cl.begin(), cl.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });

    Point y(l, 0.0);
    for (const auto& lit : cl) y[lit.var] = tag;
    points.push_back(std::move(y));

    for (unsigned row = 0; row < 8; ++row) {
      // Bit 2 is the lowest-index variable; a set bit means true.
      std::array<bool, 3> value{};
      bool sat = false;
      for (std::size_t a = 0; a < 3; ++a) {
        value[a] = (row >> (2 - a)) & 1U;
        sat = sat || value[a] == cl[a].positive;
      }
      if (!sat) continue;
      Point lo(l, 0.0), hi(l, 0.5);
      for (std::size_t a = 0; a < 3; ++a) {
        const double centre = value[a] ? tag + 0.5 : tag;
        lo[cl[a].var] = centre - eps;
        hi[cl[a].var] = centre + eps;
      }
      boxes.push_back({Hyperrectangle(std::move(lo), std::move(hi)), gamma});
      owner.push_back(c);
    }
  }

  ReductionOutput out;
  out.samples = SampleSet(std::move(points));
  out.density = BoxDensity(l, std::move(boxes));
  out.gamma = gamma;
  out.box_clause = std::move(owner);
  return out;
}

Point assignment_to_theta(const std::vector<bool>& assignment) {
  Point theta(assignment.size());
  for (std::size_t j = 0; j < assignment.size(); ++j) theta[j] = assignment[j] ? -0.5 : 0.0;
  return theta;
}

bool likelihood_positive(const ReductionOutput& reduction, PointView theta) {
  const std::size_t l = reduction.density.dimension();
  if (theta.size() != l) throw InvalidInput("likelihood: theta has the wrong dimension");
  const auto& boxes = reduction.density.boxes();
  Point shifted(l);
  for (std::size_t s = 0; s < reduction.samples.size(); ++s) {
    for (std::size_t d = 0; d < l; ++d) shifted[d] = reduction.samples[s][d] - theta[d];
    // The sample's own gadget boxes come first; any other box of the support counts too.
    const auto own = std::find(reduction.box_clause.begin(), reduction.box_clause.end(), s) -
                     reduction.box_clause.begin();
    bool hit = false;
    for (std::size_t i = 0; i < boxes.size() && !hit; ++i) {
      const std::size_t b = (static_cast<std::size_t>(own) + i) % boxes.size();
      hit = boxes[b].box.contains(shifted);
    }
    if (!hit) return false;
  }
  return true;
}

namespace {

std::vector<bool> assignment_from_mask(std::size_t l, std::uint64_t mask) {
  std::vector<bool> a(l);
  for (std::size_t j = 0; j < l; ++j) a[j] = (mask >> j) & 1U;
  return a;
}

void check_enumerable(const CnfFormula& cnf) {
  if (cnf.num_vars() > kMaxEnumerationVars) {
    throw InvalidInput("enumeration supports at most " + std::to_string(kMaxEnumerationVars) +
                       " variables, got " + std::to_string(cnf.num_vars()));
  }
}

}  // namespace

bool decide_positive_likelihood(const CnfFormula& cnf) {
  check_enumerable(cnf);
  const ReductionOutput red = reduce_3sat(cnf);
  const std::size_t l = cnf.num_vars();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << l); ++mask) {
    if (likelihood_positive(red, assignment_to_theta(assignment_from_mask(l, mask)))) return true;
  }
  return false;
}

bool brute_force_sat(const CnfFormula& cnf) {
  check_enumerable(cnf);
  const std::size_t l = cnf.num_vars();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << l); ++mask) {
    if (cnf.satisfied_by(assignment_from_mask(l, mask))) return true;
  }
  return false;
}

CnfFormula random_cnf(std::size_t num_vars, std::size_t num_clauses, std::uint64_t seed) {
  if (num_vars < 3) throw InvalidInput("random cnf: need at least 3 variables");
  if (3 * num_clauses < num_vars) throw InvalidInput("random cnf: too few clauses to use every variable");
  Rng rng(seed);
  std::vector<std::size_t> order(num_vars);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = num_vars; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<Clause> clauses;
  std::size_t next = 0;
  for (std::size_t c = 0; c < num_clauses; ++c) {
    std::vector<std::size_t> vars;
    // Cover unused variables first, then fill with random distinct ones.
    while (vars.size() < 3 && next < num_vars) vars.push_back(order[next++]);
    while (vars.size() < 3) {
      const std::size_t v = rng.below(num_vars);
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    Clause cl;
    for (std::size_t a = 0; a < 3; ++a) cl[a] = {vars[a], (rng.next() & 1U) != 0};
    clauses.push_back(cl);
  }
  for (std::size_t i = clauses.size(); i > 1; --i) std::swap(clauses[i - 1], clauses[rng.below(i)]);
  return CnfFormula(num_vars, std::move(clauses));
}

}  // namespace wassest
