#include <cmath>
#include <queue>
#include <utility>

#include "dhtwin/lp.hpp"

namespace dhtwin {

namespace {

struct Node {
  double bound;  // parent relaxation objective
  long id;
  std::vector<std::pair<int, double>> fixes;
};

struct WorseFirst {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

LpSolution solve_milp(const LpProblem& problem, const SolverOptions& options) {
  problem.validate();
  LpSolution best;
  best.status = LpStatus::Infeasible;
  bool have_incumbent = false;
  bool truncated = false;
  long iterations = 0;
  long nodes = 0;
  long next_id = 0;

  auto cutoff = [&]() {
    return best.objective_value - options.mip_gap * std::max(1.0, std::abs(best.objective_value));
  };

  std::priority_queue<Node, std::vector<Node>, WorseFirst> open;
  open.push({-kInf, next_id++, {}});
  LpProblem sub = problem;

  while (!open.empty()) {
    if (nodes >= options.max_nodes) {
      truncated = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound >= cutoff()) continue;

    sub.bounds = problem.bounds;
    for (auto [j, v] : node.fixes) sub.bounds[j] = {v, v};
    const LpSolution relax = solve_lp(sub, options);
    ++nodes;
    iterations += relax.iterations;

    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status == LpStatus::Unbounded) {
      LpSolution out;
      out.status = LpStatus::Unbounded;
      out.iterations = iterations;
      out.nodes_explored = nodes;
      return out;
    }
    if (relax.status == LpStatus::IterationLimit) {
      truncated = true;
      continue;
    }
    if (have_incumbent && relax.objective_value >= cutoff()) continue;

    int branch_var = -1;
    double most = 0.0;
    for (int j = 0; j < problem.num_vars; ++j) {
      if (problem.integrality[j] != VarType::binary) continue;
      const double f = relax.x[j] - std::floor(relax.x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > options.int_tol && dist > most) {
        most = dist;
        branch_var = j;
      }
    }
    if (branch_var < 0) {
      best = relax;
      have_incumbent = true;
      continue;
    }
    for (double v : {0.0, 1.0}) {
      Node child{relax.objective_value, next_id++, node.fixes};
      child.fixes.emplace_back(branch_var, v);
      open.push(std::move(child));
    }
  }

  best.iterations = iterations;
  best.nodes_explored = nodes;
  if (truncated) {
    best.status = LpStatus::IterationLimit;
    if (!have_incumbent) best.x.clear();
  } else {
    best.status = have_incumbent ? LpStatus::Optimal : LpStatus::Infeasible;
  }
  if (best.status != LpStatus::Optimal) {
    best.reduced_costs.clear();
    best.var_status.clear();
  }
  return best;
}

}  // namespace dhtwin
