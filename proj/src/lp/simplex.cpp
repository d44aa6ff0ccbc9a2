#include <algorithm>
#include <cmath>

#include "dhtwin/error.hpp"
#include "dhtwin/lp.hpp"

namespace dhtwin {

namespace {

constexpr double kPivotTol = 1e-9;

// Column layout: [structural 0..n) [slack per row n..n+m) [artificials].
// Row i of the original system reads  a_i x + s_i (+ sign_i * art) = b_i,
// with slack bounds LE: [0,inf), GE: (-inf,0], EQ: [0,0].
class Simplex {
 public:
  Simplex(const LpProblem& p, const SolverOptions& o) : p_(p), o_(o) {}

  LpSolution run() {
    setup();
    LpSolution sol;
    if (n_art_ > 0) {
      const auto st = iterate();
      if (st == LpStatus::IterationLimit) return finish(sol, st);
      refresh_basic_values();
      double infeas = 0.0;
      for (std::size_t r = 0; r < m_; ++r)
        if (static_cast<std::size_t>(basis_[r]) >= first_art_) infeas += std::max(0.0, beta_[r]);
      if (infeas > o_.feas_tol * infeas_scale_) return finish(sol, LpStatus::Infeasible);
      for (std::size_t j = first_art_; j < n_tot_; ++j) up_[j] = 0.0;
    }
    for (std::size_t j = 0; j < n_tot_; ++j) cost_[j] = j < n_ ? p_.objective[j] : 0.0;
    price_out_costs();
    bland_ = false;
    stall_ = 0;
    const auto st = iterate();
    if (st != LpStatus::Optimal) return finish(sol, st);
    refresh_basic_values();
    return finish(sol, LpStatus::Optimal);
  }

 private:
  double& at(std::size_t r, std::size_t c) { return tab_[r * n_tot_ + c]; }

  double nonbasic_value(std::size_t j) const {
    switch (status_[j]) {
      case VarStatus::AtLower: return lo_[j];
      case VarStatus::AtUpper: return up_[j];
      default: return 0.0;
    }
  }

  void setup() {
    n_ = static_cast<std::size_t>(p_.num_vars);
    m_ = p_.constraints.size();
    lo_.clear();
    up_.clear();
    status_.clear();
    for (std::size_t j = 0; j < n_; ++j) {
      const auto b = p_.bounds[j];
      lo_.push_back(b.lower);
      up_.push_back(b.upper);
      status_.push_back(std::isfinite(b.lower)   ? VarStatus::AtLower
                        : std::isfinite(b.upper) ? VarStatus::AtUpper
                                                 : VarStatus::FreeZero);
    }
    // Residuals with every structural variable at its starting value.
    std::vector<double> resid(m_);
    infeas_scale_ = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& c = p_.constraints[i];
      double r = c.rhs;
      for (const auto& t : c.row) r -= t.coef * nonbasic_value(t.var);
      resid[i] = r;
      infeas_scale_ = std::max(infeas_scale_, std::abs(r));
    }
    // Slacks, then artificials for rows the slack cannot absorb.
    art_sign_.assign(m_, 0.0);
    std::size_t arts = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto rel = p_.constraints[i].relation;
      const double r = resid[i];
      const bool slack_ok = (rel == Relation::LE && r >= 0.0) ||
                            (rel == Relation::GE && r <= 0.0) ||
                            (rel == Relation::EQ && r == 0.0);
      lo_.push_back(rel == Relation::GE ? -kInf : 0.0);
      up_.push_back(rel == Relation::LE ? kInf : 0.0);
      status_.push_back(rel == Relation::GE ? VarStatus::AtUpper : VarStatus::AtLower);
      if (!slack_ok) {
        art_sign_[i] = r > 0.0 ? 1.0 : -1.0;
        ++arts;
      }
    }
    first_art_ = n_ + m_;
    n_art_ = arts;
    n_tot_ = n_ + m_ + n_art_;
    tab_.assign((m_ + 1) * n_tot_, 0.0);
    basis_.assign(m_, 0);
    beta_.assign(m_, 0.0);
    cost_.assign(n_tot_, 0.0);

    std::size_t k = first_art_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& c = p_.constraints[i];
      // B^{-1} is diag(1/sign) on artificial rows, identity elsewhere.
      const double scale = art_sign_[i] != 0.0 ? 1.0 / art_sign_[i] : 1.0;
      for (const auto& t : c.row) at(i, t.var) += t.coef * scale;
      at(i, n_ + i) = scale;
      if (art_sign_[i] != 0.0) {
        lo_.push_back(0.0);
        up_.push_back(kInf);
        status_.push_back(VarStatus::Basic);
        at(i, k) = 1.0;
        cost_[k] = 1.0;
        basis_[i] = static_cast<int>(k);
        beta_[i] = std::abs(resid[i]);
        ++k;
      } else {
        status_[n_ + i] = VarStatus::Basic;
        basis_[i] = static_cast<int>(n_ + i);
        beta_[i] = resid[i];
      }
    }
    price_out_costs();
  }

  // Cost row d_j = c_j - c_B' B^{-1} a_j.
  void price_out_costs() {
    for (std::size_t j = 0; j < n_tot_; ++j) at(m_, j) = cost_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < n_tot_; ++j) at(m_, j) -= cb * at(i, j);
    }
    for (std::size_t i = 0; i < m_; ++i) at(m_, basis_[i]) = 0.0;
  }

  // beta = B^{-1} (b - N x_N); the slack columns of the tableau hold B^{-1}.
  void refresh_basic_values() {
    std::vector<double> r(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& c = p_.constraints[i];
      double v = c.rhs;
      for (const auto& t : c.row)
        if (status_[t.var] != VarStatus::Basic) v -= t.coef * nonbasic_value(t.var);
      r[i] = v;
    }
    for (std::size_t row = 0; row < m_; ++row) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += at(row, n_ + i) * r[i];
      beta_[row] = v;
    }
  }

  LpStatus iterate() {
    const std::size_t stall_limit = 3 * (m_ + n_tot_);
    while (true) {
      // Pricing.
      std::size_t enter = n_tot_;
      double best = 0.0;
      double dir = 0.0;
      for (std::size_t j = 0; j < n_tot_; ++j) {
        const auto s = status_[j];
        if (s == VarStatus::Basic || lo_[j] == up_[j]) continue;
        const double d = at(m_, j);
        double jdir = 0.0;
        if (s == VarStatus::AtLower && d < -o_.feas_tol) jdir = 1.0;
        else if (s == VarStatus::AtUpper && d > o_.feas_tol) jdir = -1.0;
        else if (s == VarStatus::FreeZero && std::abs(d) > o_.feas_tol) jdir = d < 0 ? 1.0 : -1.0;
        if (jdir == 0.0) continue;
        if (bland_) {
          enter = j;
          dir = jdir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
          dir = jdir;
        }
      }
      if (enter == n_tot_) return LpStatus::Optimal;
      if (iterations_ >= o_.max_iterations) return LpStatus::IterationLimit;
      ++iterations_;

      // Ratio test: basic i moves at rate -dir * alpha_i per unit step.
      double tmin = kInf;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = at(i, enter);
        if (std::abs(alpha) <= kPivotTol) continue;
        const double lim = row_limit(i, -dir * alpha);
        tmin = std::min(tmin, lim);
      }
      const double span = up_[enter] - lo_[enter];
      const bool flip = std::isfinite(span) && span <= tmin;
      if (!flip && !std::isfinite(tmin)) return LpStatus::Unbounded;

      std::size_t leave_row = m_;
      double t = flip ? span : tmin;
      if (!flip) {
        double best_alpha = -1.0;
        int best_var = -1;
        for (std::size_t i = 0; i < m_; ++i) {
          const double alpha = at(i, enter);
          if (std::abs(alpha) <= kPivotTol) continue;
          if (row_limit(i, -dir * alpha) > tmin + 1e-12) continue;
          if (bland_) {
            if (best_var < 0 || basis_[i] < best_var) {
              best_var = basis_[i];
              leave_row = i;
            }
          } else if (std::abs(alpha) > best_alpha) {
            best_alpha = std::abs(alpha);
            leave_row = i;
          }
        }
      }

      const double gain = -at(m_, enter) * dir * t;
      if (gain <= 1e-12) {
        if (++stall_ > stall_limit) bland_ = true;
      } else {
        stall_ = 0;
      }

      const double enter_value = nonbasic_value(enter) + dir * t;
      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= dir * t * at(i, enter);

      if (flip) {
        status_[enter] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
        continue;
      }
      const auto leave = static_cast<std::size_t>(basis_[leave_row]);
      const double rate = -dir * at(leave_row, enter);
      status_[leave] = rate < 0 ? VarStatus::AtLower : VarStatus::AtUpper;
      if (!std::isfinite(nonbasic_value(leave))) status_[leave] = VarStatus::FreeZero;
      if (leave >= first_art_) {
        up_[leave] = 0.0;
        status_[leave] = VarStatus::AtLower;
      }
      status_[enter] = VarStatus::Basic;
      basis_[leave_row] = static_cast<int>(enter);
      beta_[leave_row] = enter_value;
      kernels::pivot(tab_, m_ + 1, n_tot_, leave_row, enter, o_.pivot_exec);
    }
  }

  // Step length until basic row i hits a bound while moving at `rate`.
  double row_limit(std::size_t i, double rate) const {
    const auto b = static_cast<std::size_t>(basis_[i]);
    if (rate < 0.0) {
      if (!std::isfinite(lo_[b])) return kInf;
      return std::max(0.0, (beta_[i] - lo_[b]) / -rate);
    }
    if (!std::isfinite(up_[b])) return kInf;
    return std::max(0.0, (up_[b] - beta_[i]) / rate);
  }

  LpSolution& finish(LpSolution& sol, LpStatus st) {
    sol.status = st;
    sol.iterations = iterations_;
    if (st != LpStatus::Optimal) return sol;
    sol.x.assign(n_, 0.0);
    sol.var_status.assign(status_.begin(), status_.begin() + static_cast<long>(n_));
    sol.reduced_costs.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (status_[j] != VarStatus::Basic) {
        sol.x[j] = nonbasic_value(j);
        sol.reduced_costs[j] = tab_[m_ * n_tot_ + j];
      }
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (static_cast<std::size_t>(basis_[i]) < n_) sol.x[basis_[i]] = beta_[i];
    double obj = 0.0;
    for (std::size_t j = 0; j < n_; ++j) obj += p_.objective[j] * sol.x[j];
    sol.objective_value = obj;
    return sol;
  }

  const LpProblem& p_;
  const SolverOptions& o_;
  std::size_t n_ = 0, m_ = 0, n_art_ = 0, n_tot_ = 0, first_art_ = 0;
  std::vector<double> tab_, lo_, up_, cost_, beta_, art_sign_;
  std::vector<VarStatus> status_;
  std::vector<int> basis_;
  double infeas_scale_ = 1.0;
  long iterations_ = 0;
  std::size_t stall_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SolverOptions& options) {
  problem.validate();
  if (!(options.feas_tol > 0.0) || !(options.int_tol > 0.0) || !(options.mip_gap > 0.0))
    throw Error(Errc::InvalidArgument, "solver tolerances must be > 0");
  for (const auto& b : problem.bounds)
    if (b.lower > b.upper) {
      LpSolution infeasible;
      infeasible.status = LpStatus::Infeasible;
      return infeasible;
    }
  Simplex s(problem, options);
  return s.run();
}

}  // namespace dhtwin
