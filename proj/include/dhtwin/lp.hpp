#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "dhtwin/kernels.hpp"

namespace dhtwin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LE, GE, EQ };
enum class VarType { continuous, binary };

struct Term {
  int var;
  double coef;
};

struct Constraint {
  std::vector<Term> row;
  Relation relation = Relation::LE;
  double rhs = 0.0;
};

struct VarBounds {
  double lower = 0.0;
  double upper = kInf;
};

// minimize c'x subject to rows and per-variable bounds.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<VarBounds> bounds;
  std::vector<VarType> integrality;

  LpProblem() = default;
  explicit LpProblem(int n)
      : num_vars(n), objective(n, 0.0), bounds(n), integrality(n, VarType::continuous) {}

  void add_constraint(std::vector<Term> row, Relation rel, double rhs) {
    constraints.push_back({std::move(row), rel, rhs});
  }
  void set_binary(int j) {
    integrality[j] = VarType::binary;
    bounds[j] = {0.0, 1.0};
  }

  // Throws MalformedProblem.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
std::string_view status_name(LpStatus s) noexcept;

enum class VarStatus { Basic, AtLower, AtUpper, FreeZero };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;        // set iff Optimal (or an incumbent exists)
  double objective_value = 0.0;
  long iterations = 0;
  long nodes_explored = 0;
  // Phase-2 reduced costs and final status of the structural variables;
  // filled for LP solves that end Optimal.
  std::vector<double> reduced_costs;
  std::vector<VarStatus> var_status;

  bool has_x() const noexcept { return !x.empty(); }
};

struct SolverOptions {
  double feas_tol = 1e-9;
  double int_tol = 1e-6;
  long max_iterations = 50'000;
  long max_nodes = 10'000;
  double mip_gap = 1e-6;
  kernels::Exec pivot_exec = kernels::Exec::automatic;
};

/// Two-phase bounded-variable primal simplex on a dense tableau. Integrality
/// markers are ignored (binaries are relaxed to [0,1]).
LpSolution solve_lp(const LpProblem& problem, const SolverOptions& options = {});

/// Best-first branch and bound on the binary variables.
LpSolution solve_milp(const LpProblem& problem, const SolverOptions& options = {});

struct Violation {
  enum class Kind { Row, LowerBound, UpperBound, Integrality };
  Kind kind;
  int index;  // constraint index for Row, variable index otherwise
  double magnitude;
};

/// Every violated row, bound and integrality requirement, largest first.
std::vector<Violation> check_solution(const LpProblem& problem, std::span<const double> x,
                                      double feas_tol, double int_tol = 1e-6);

// Plain-text problem dump; see docs/lp_format.md.
void write_lp(const LpProblem& problem, std::ostream& out);
LpProblem read_lp(std::istream& in);

}  // namespace dhtwin
