#pragma once

#include "advflow/netgraph.hpp"
#include "advflow/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace advflow {

enum class Relation { LessEqual, Equal, GreaterEqual };

/// Which flow-balancing program a problem encodes.
///  - Lp1:      max  sum F(p) - lambda         (path variables)
///  - Lp1Prime: max  C - lambda, sum F(p) = C  (path variables)
///  - Lp2:      max  C - lambda               (edge variables)
enum class LpKind { Lp1, Lp1Prime, Lp2, Custom };

std::string lp_kind_tag(LpKind kind);  // "1", "1'", "2", "custom"

struct Constraint {
  std::vector<std::pair<std::size_t, Rational>> terms;  // (variable, coefficient)
  Relation relation = Relation::LessEqual;
  Rational rhs;
  std::string label;
};

/// Maximisation problem over non-negative variables.
struct LpProblem {
  std::vector<std::string> variables;
  std::vector<Rational> objective;  // one coefficient per variable
  Rational objective_constant;
  std::vector<Constraint> constraints;

  LpKind kind = LpKind::Custom;
  std::size_t z = 0;
  std::size_t capacity = 0;            // min-cut C of the source network
  std::vector<Path> paths;             // path-form problems: variable i <-> paths[i]
  std::size_t lambda_index = 0;        // index of the lambda variable
  std::size_t subset_size = 0;         // size of the adversarial subsets instantiated
  bool adversary_covers_all = false;   // z >= number of internal nodes

  std::size_t add_variable(std::string name, Rational objective_coefficient = 0);
  void add_constraint(Constraint c);
  std::size_t count_rows(std::string_view label_prefix) const;
};

struct LpSolution {
  LpKind kind = LpKind::Custom;
  std::size_t z = 0;
  std::size_t capacity = 0;
  std::vector<std::string> variables;
  std::vector<Rational> values;
  Rational objective;
  Rational lambda;
  std::vector<Path> paths;
  std::vector<Rational> path_flows;  // path-form only, aligned with `paths`
  std::vector<Rational> edge_flows;  // every kind that models a network
  std::size_t pivots = 0;

  /// Total flow through the internal nodes of `nodes` counted by paths
  /// (path form) or by incoming edges (edge form).
  Rational flow_through(const Network& net, const NodeSet& nodes) const;
};

/// Path-variable program with balance rows for every internal subset of size
/// exactly z (smaller subsets are implied).
LpProblem build_lp1(const Network& net, std::size_t z, const std::vector<Path>& paths);

/// As build_lp1 with objective C - lambda and the total-flow row sum F(p) = C.
LpProblem build_lp1_prime(const Network& net, std::size_t z, const std::vector<Path>& paths);

/// Edge-variable program: conservation at internal nodes, capacity rows,
/// incoming-edge balance rows per subset and total flow C out of the source
/// and into the terminal.
LpProblem build_lp2(const Network& net, std::size_t z);

/// Exact two-phase primal simplex with Bland's rule. The returned basic
/// solution is re-checked against every constraint before it is returned.
/// Throws LpError when infeasible, unbounded, or past the pivot cap.
LpSolution solve_exact(const LpProblem& lp, std::size_t pivot_cap = 200'000);

/// True iff `values` satisfies every constraint and bound of `lp` exactly.
bool satisfies(const LpProblem& lp, const std::vector<Rational>& values);

}  // namespace advflow
