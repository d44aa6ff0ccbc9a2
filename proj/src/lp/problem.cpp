#include <algorithm>
#include <cmath>
#include <string>

#include "dhtwin/error.hpp"
#include "dhtwin/lp.hpp"

namespace dhtwin {

std::string_view status_name(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

void LpProblem::validate() const {
  auto bad = [](const std::string& m) { return Error(Errc::MalformedProblem, m); };
  if (num_vars < 0) throw bad("negative variable count");
  const auto n = static_cast<std::size_t>(num_vars);
  if (objective.size() != n || bounds.size() != n || integrality.size() != n)
    throw bad("objective/bounds/integrality sizes differ from num_vars");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw bad("non-finite objective coefficient");
    if (std::isnan(bounds[j].lower) || std::isnan(bounds[j].upper) ||
        bounds[j].lower == kInf || bounds[j].upper == -kInf)
      throw bad("invalid bounds on variable " + std::to_string(j));
    if (integrality[j] == VarType::binary &&
        (bounds[j].lower < 0.0 || bounds[j].upper > 1.0))
      throw bad("binary variable " + std::to_string(j) + " has bounds outside [0,1]");
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    if (!std::isfinite(c.rhs)) throw bad("non-finite rhs in row " + std::to_string(i));
    for (const auto& t : c.row) {
      if (t.var < 0 || t.var >= num_vars)
        throw bad("row " + std::to_string(i) + " references variable " +
                  std::to_string(t.var));
      if (!std::isfinite(t.coef)) throw bad("non-finite coefficient in row " + std::to_string(i));
    }
  }
}

std::vector<Violation> check_solution(const LpProblem& problem, std::span<const double> x,
                                      double feas_tol, double int_tol) {
  if (x.size() != static_cast<std::size_t>(problem.num_vars))
    throw Error(Errc::DimensionMismatch, "solution has " + std::to_string(x.size()) +
                                             " entries for " +
                                             std::to_string(problem.num_vars) + " variables");
  std::vector<Violation> out;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& c = problem.constraints[i];
    double act = 0.0;
    for (const auto& t : c.row) act += t.coef * x[t.var];
    double v = 0.0;
    switch (c.relation) {
      case Relation::LE: v = act - c.rhs; break;
      case Relation::GE: v = c.rhs - act; break;
      case Relation::EQ: v = std::abs(act - c.rhs); break;
    }
    if (v > feas_tol) out.push_back({Violation::Kind::Row, static_cast<int>(i), v});
  }
  for (int j = 0; j < problem.num_vars; ++j) {
    const auto b = problem.bounds[j];
    if (b.lower - x[j] > feas_tol)
      out.push_back({Violation::Kind::LowerBound, j, b.lower - x[j]});
    if (x[j] - b.upper > feas_tol)
      out.push_back({Violation::Kind::UpperBound, j, x[j] - b.upper});
    if (problem.integrality[j] == VarType::binary) {
      const double d = std::abs(x[j] - std::round(x[j]));
      if (d > int_tol) out.push_back({Violation::Kind::Integrality, j, d});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return a.magnitude > b.magnitude;
  });
  return out;
}

}  // namespace dhtwin
