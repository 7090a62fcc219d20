#include "advflow/exactlp.hpp"

#include "advflow/error.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <algorithm>
#include <optional>

namespace advflow {

namespace {

using Tableau = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using Row = Eigen::Matrix<Rational, 1, Eigen::Dynamic>;

std::string subset_label(const Network& net, const NodeSet& z) {
  std::string s = "bal:{";
  for (std::size_t i = 0; i < z.size(); ++i) s += (i ? "," : "") + net.name(z[i]);
  return s + "}";
}

void check_z(std::size_t z) {
  if (z < 1) throw std::invalid_argument("adversary budget z must be >= 1");
}

// Path-form rows shared by both path programs.
LpProblem path_form(const Network& net, std::size_t z, const std::vector<Path>& paths) {
  check_z(z);
  LpProblem lp;
  lp.z = z;
  lp.capacity = min_cut(net);
  lp.paths = paths;
  for (std::size_t i = 0; i < paths.size(); ++i)
    lp.add_variable("F(" + path_to_string(net, paths[i]) + ")");
  lp.lambda_index = lp.add_variable("lambda");

  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    Constraint c;
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (paths[i].uses(e)) c.terms.emplace_back(i, 1);
    c.relation = Relation::LessEqual;
    c.rhs = 1;
    c.label = "cap:e" + std::to_string(e);
    lp.add_constraint(std::move(c));
  }

  const std::size_t internal = net.internal_nodes().size();
  lp.adversary_covers_all = z >= internal;
  lp.subset_size = std::min(z, internal);
  if (internal > 0) {
    for (const NodeSet& subset : internal_subsets(net, z)) {
      Constraint c;
      for (std::size_t i = 0; i < paths.size(); ++i)
        if (paths[i].intersects(subset)) c.terms.emplace_back(i, 1);
      c.terms.emplace_back(lp.lambda_index, -1);
      c.relation = Relation::LessEqual;
      c.rhs = 0;
      c.label = subset_label(net, subset);
      lp.add_constraint(std::move(c));
    }
  }
  return lp;
}

}  // namespace

std::string lp_kind_tag(LpKind kind) {
  switch (kind) {
    case LpKind::Lp1: return "1";
    case LpKind::Lp1Prime: return "1'";
    case LpKind::Lp2: return "2";
    case LpKind::Custom: break;
  }
  return "custom";
}

std::size_t LpProblem::add_variable(std::string name, Rational objective_coefficient) {
  variables.push_back(std::move(name));
  objective.push_back(std::move(objective_coefficient));
  return variables.size() - 1;
}

void LpProblem::add_constraint(Constraint c) {
  for (const auto& [var, coef] : c.terms)
    if (var >= variables.size()) throw std::invalid_argument("constraint references undeclared variable");
  constraints.push_back(std::move(c));
}

std::size_t LpProblem::count_rows(std::string_view label_prefix) const {
  return static_cast<std::size_t>(std::count_if(constraints.begin(), constraints.end(), [&](const Constraint& c) {
    return std::string_view(c.label).starts_with(label_prefix);
  }));
}

Rational LpSolution::flow_through(const Network& net, const NodeSet& nodes) const {
  Rational total = 0;
  if (!path_flows.empty()) {
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (paths[i].intersects(nodes)) total += path_flows[i];
    return total;
  }
  for (NodeId v : nodes)
    for (EdgeId e : net.in_edges(v)) total += edge_flows.at(e);
  return total;
}

LpProblem build_lp1(const Network& net, std::size_t z, const std::vector<Path>& paths) {
  LpProblem lp = path_form(net, z, paths);
  lp.kind = LpKind::Lp1;
  for (std::size_t i = 0; i < paths.size(); ++i) lp.objective[i] = 1;
  lp.objective[lp.lambda_index] = -1;
  return lp;
}

LpProblem build_lp1_prime(const Network& net, std::size_t z, const std::vector<Path>& paths) {
  LpProblem lp = path_form(net, z, paths);
  lp.kind = LpKind::Lp1Prime;
  lp.objective_constant = static_cast<long long>(lp.capacity);
  lp.objective[lp.lambda_index] = -1;
  Constraint total;
  for (std::size_t i = 0; i < paths.size(); ++i) total.terms.emplace_back(i, 1);
  total.relation = Relation::Equal;
  total.rhs = static_cast<long long>(lp.capacity);
  total.label = "total";
  lp.add_constraint(std::move(total));
  return lp;
}

LpProblem build_lp2(const Network& net, std::size_t z) {
  check_z(z);
  LpProblem lp;
  lp.kind = LpKind::Lp2;
  lp.z = z;
  lp.capacity = min_cut(net);
  for (EdgeId e = 0; e < net.num_edges(); ++e)
    lp.add_variable("F(" + net.name(net.edge(e).tail) + "->" + net.name(net.edge(e).head) + "#" +
                    std::to_string(e) + ")");
  lp.lambda_index = lp.add_variable("lambda", -1);
  lp.objective_constant = static_cast<long long>(lp.capacity);

  for (EdgeId e = 0; e < net.num_edges(); ++e)
    lp.add_constraint({{{e, 1}}, Relation::LessEqual, 1, "cap:e" + std::to_string(e)});

  for (NodeId v : net.internal_nodes()) {
    Constraint c;
    for (EdgeId e : net.in_edges(v)) c.terms.emplace_back(e, 1);
    for (EdgeId e : net.out_edges(v)) c.terms.emplace_back(e, -1);
    c.relation = Relation::Equal;
    c.rhs = 0;
    c.label = "cons:" + net.name(v);
    lp.add_constraint(std::move(c));
  }

  const std::size_t internal = net.internal_nodes().size();
  lp.adversary_covers_all = z >= internal;
  lp.subset_size = std::min(z, internal);
  if (internal > 0) {
    for (const NodeSet& subset : internal_subsets(net, z)) {
      Constraint c;
      for (NodeId v : subset)
        for (EdgeId e : net.in_edges(v)) c.terms.emplace_back(e, 1);
      c.terms.emplace_back(lp.lambda_index, -1);
      c.relation = Relation::LessEqual;
      c.rhs = 0;
      c.label = subset_label(net, subset);
      lp.add_constraint(std::move(c));
    }
  }

  Constraint out_s, in_t;
  for (EdgeId e : net.out_edges(net.source())) out_s.terms.emplace_back(e, 1);
  for (EdgeId e : net.in_edges(net.terminal())) in_t.terms.emplace_back(e, 1);
  out_s.relation = in_t.relation = Relation::Equal;
  out_s.rhs = in_t.rhs = static_cast<long long>(lp.capacity);
  out_s.label = "source";
  in_t.label = "terminal";
  lp.add_constraint(std::move(out_s));
  lp.add_constraint(std::move(in_t));
  return lp;
}

bool satisfies(const LpProblem& lp, const std::vector<Rational>& values) {
  if (values.size() != lp.variables.size()) return false;
  for (const Rational& v : values)
    if (v < 0) return false;
  for (const Constraint& c : lp.constraints) {
    Rational lhs = 0;
    for (const auto& [var, coef] : c.terms) lhs += coef * values[var];
    switch (c.relation) {
      case Relation::LessEqual:
        if (lhs > c.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != c.rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < c.rhs) return false;
        break;
    }
  }
  return true;
}

namespace {

class Simplex {
 public:
  Simplex(const LpProblem& lp, std::size_t pivot_cap) : lp_(lp), cap_(pivot_cap) {
    n_ = lp.variables.size();
    const std::size_t m = lp.constraints.size();
    std::vector<Relation> rel(m);
    std::vector<int> sign(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
      rel[i] = lp.constraints[i].relation;
      if (lp.constraints[i].rhs < 0) {
        sign[i] = -1;
        if (rel[i] == Relation::LessEqual)
          rel[i] = Relation::GreaterEqual;
        else if (rel[i] == Relation::GreaterEqual)
          rel[i] = Relation::LessEqual;
      }
    }
    std::size_t slacks = 0, artificials = 0;
    for (Relation r : rel) {
      if (r != Relation::Equal) ++slacks;
      if (r != Relation::LessEqual) ++artificials;
    }
    first_art_ = n_ + slacks;
    cols_ = first_art_ + artificials;
    T_ = Tableau::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(cols_ + 1));
    basis_.assign(m, 0);
    active_.assign(m, true);

    std::size_t next_slack = n_, next_art = first_art_;
    for (std::size_t i = 0; i < m; ++i) {
      const Constraint& c = lp.constraints[i];
      for (const auto& [var, coef] : c.terms) T_(row(i), col(var)) += sign[i] * coef;
      T_(row(i), col(cols_)) = sign[i] * c.rhs;
      if (rel[i] == Relation::LessEqual) {
        T_(row(i), col(next_slack)) = 1;
        basis_[i] = next_slack++;
      } else {
        if (rel[i] == Relation::GreaterEqual) T_(row(i), col(next_slack++)) = -1;
        T_(row(i), col(next_art)) = 1;
        basis_[i] = next_art++;
      }
    }
  }

  std::vector<Rational> run() {
    if (first_art_ < cols_) {
      Row cost = Row::Zero(static_cast<Eigen::Index>(cols_ + 1));
      for (std::size_t j = first_art_; j < cols_; ++j) cost(col(j)) = -1;
      load_objective(cost);
      optimise(cols_);
      if (obj_(col(cols_)) != 0) throw LpError("problem is infeasible");
      expel_artificials();
    }
    Row cost = Row::Zero(static_cast<Eigen::Index>(cols_ + 1));
    for (std::size_t j = 0; j < n_; ++j) cost(col(j)) = lp_.objective[j];
    load_objective(cost);
    optimise(first_art_);

    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (active_[i] && basis_[i] < n_) x[basis_[i]] = T_(row(i), col(cols_));
    return x;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  static Eigen::Index row(std::size_t i) { return static_cast<Eigen::Index>(i); }
  static Eigen::Index col(std::size_t j) { return static_cast<Eigen::Index>(j); }

  // Reduced-cost row for a maximisation; entry `cols_` holds -value.
  void load_objective(const Row& cost) {
    obj_ = cost;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (!active_[i]) continue;
      Rational cb = obj_(col(basis_[i]));
      if (cb != 0) obj_ -= cb * T_.row(row(i));
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    if (++pivots_ > cap_) throw LpError("simplex pivot cap exceeded");
    Rational p = T_(row(r), col(c));
    std::vector<Eigen::Index> nz;
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (T_(row(r), col(j)) != 0) {
        T_(row(r), col(j)) /= p;
        nz.push_back(col(j));
      }
    }
    auto eliminate = [&](auto&& target_row) {
      Rational f = target_row(col(c));
      if (f == 0) return;
      for (Eigen::Index j : nz) target_row(j) -= f * T_(row(r), j);
    };
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (i != r && active_[i]) eliminate(T_.row(row(i)));
    eliminate(obj_);
    basis_[r] = c;
  }

  // Bland's rule: lowest-index improving column, lowest-index leaving variable on ties.
  void optimise(std::size_t allowed_cols) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (obj_(col(j)) > 0) {
          enter = j;
          break;
        }
      if (!enter) return;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (!active_[i]) continue;
        const Rational& a = T_(row(i), col(*enter));
        if (a <= 0) continue;
        Rational ratio = T_(row(i), col(cols_)) / a;
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) throw LpError("problem is unbounded");
      pivot(*leave, *enter);
    }
  }

  void expel_artificials() {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (!active_[i] || basis_[i] < first_art_) continue;
      std::optional<std::size_t> c;
      for (std::size_t j = 0; j < first_art_; ++j)
        if (T_(row(i), col(j)) != 0) {
          c = j;
          break;
        }
      if (c)
        pivot(i, *c);
      else
        active_[i] = false;  // redundant equality
    }
  }

  const LpProblem& lp_;
  std::size_t cap_;
  std::size_t n_ = 0, first_art_ = 0, cols_ = 0;
  Tableau T_;
  Row obj_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve_exact(const LpProblem& lp, std::size_t pivot_cap) {
  Simplex simplex(lp, pivot_cap);
  std::vector<Rational> x = simplex.run();
  if (!satisfies(lp, x)) throw LpError("internal error: simplex solution violates a constraint");

  LpSolution sol;
  sol.kind = lp.kind;
  sol.z = lp.z;
  sol.capacity = lp.capacity;
  sol.variables = lp.variables;
  sol.pivots = simplex.pivots();
  sol.objective = lp.objective_constant;
  for (std::size_t j = 0; j < x.size(); ++j) sol.objective += lp.objective[j] * x[j];
  sol.values = std::move(x);
  if (lp.kind == LpKind::Custom) return sol;

  sol.lambda = sol.values.at(lp.lambda_index);
  if (lp.kind == LpKind::Lp2) {
    sol.edge_flows.assign(sol.values.begin(), sol.values.begin() + static_cast<std::ptrdiff_t>(lp.lambda_index));
  } else {
    sol.paths = lp.paths;
    sol.path_flows.assign(sol.values.begin(), sol.values.begin() + static_cast<std::ptrdiff_t>(lp.paths.size()));
    std::size_t edges = lp.count_rows("cap:");
    sol.edge_flows.assign(edges, Rational(0));
    for (std::size_t i = 0; i < lp.paths.size(); ++i)
      for (EdgeId e : lp.paths[i].edges) sol.edge_flows.at(e) += sol.path_flows[i];
  }
  return sol;
}

}  // namespace advflow
