#include "snailbudget/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace snailbudget {

namespace {

// Dense two-phase tableau with Bland's rule. Problem sizes here are tiny
// (a handful of variables, at most a few hundred constraints), so no
// revised-simplex machinery is warranted.
class Tableau {
 public:
  Tableau(const LinearProgram& lp) : n_(lp.num_vars) {
    const int m = static_cast<int>(lp.constraints.size());
    int n_slack = 0, n_art = 0;
    for (const auto& c : lp.constraints) {
      if (static_cast<int>(c.coeffs.size()) != lp.num_vars)
        throw std::invalid_argument("simplex: coefficient length mismatch");
      bool flip = c.bound < 0;
      Relation rel = c.rel;
      if (flip) rel = rel == Relation::LE   ? Relation::GE
                      : rel == Relation::GE ? Relation::LE
                                            : Relation::EQ;
      if (rel == Relation::LE)
        ++n_slack;
      else if (rel == Relation::GE)
        ++n_slack, ++n_art;
      else
        ++n_art;
    }
    cols_ = n_ + n_slack + n_art;
    art_begin_ = n_ + n_slack;
    t_ = Eigen::MatrixXd::Zero(m, cols_ + 1);
    basis_.resize(m);

    double scale = 1.0;
    int slack = n_, art = art_begin_;
    for (int i = 0; i < m; ++i) {
      const auto& c = lp.constraints[i];
      double sgn = c.bound < 0 ? -1.0 : 1.0;
      Relation rel = c.rel;
      if (sgn < 0) rel = rel == Relation::LE   ? Relation::GE
                         : rel == Relation::GE ? Relation::LE
                                               : Relation::EQ;
      for (int j = 0; j < n_; ++j) {
        t_(i, j) = sgn * c.coeffs[j];
        scale = std::max(scale, std::abs(c.coeffs[j]));
      }
      t_(i, cols_) = sgn * c.bound;
      scale = std::max(scale, std::abs(c.bound));
      if (rel == Relation::LE) {
        t_(i, slack) = 1.0;
        basis_[i] = slack++;
      } else if (rel == Relation::GE) {
        t_(i, slack) = -1.0;
        ++slack;
        t_(i, art) = 1.0;
        basis_[i] = art++;
      } else {
        t_(i, art) = 1.0;
        basis_[i] = art++;
      }
    }
    eps_ = 1e-9 * scale;
  }

  bool run_phase1() {
    // Minimize the sum of artificials: cost row is minus the sum of the
    // rows whose basic variable is artificial.
    cost_ = Eigen::RowVectorXd::Zero(cols_ + 1);
    for (int j = art_begin_; j < cols_; ++j) cost_(j) = 1.0;
    for (int i = 0; i < rows(); ++i)
      if (basis_[i] >= art_begin_) cost_ -= t_.row(i);
    pivot_loop(cols_);
    if (-cost_(cols_) > 10 * eps_) return false;  // positive residual
    drive_out_artificials();
    return true;
  }

  void run_phase2(const std::vector<double>& objective) {
    cost_ = Eigen::RowVectorXd::Zero(cols_ + 1);
    for (int j = 0; j < n_; ++j) cost_(j) = objective[j];
    for (int i = 0; i < rows(); ++i)
      if (std::abs(cost_(basis_[i])) > 0)
        cost_ -= cost_(basis_[i]) * t_.row(i);
    pivot_loop(art_begin_);  // artificials may not re-enter
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (int i = 0; i < rows(); ++i)
      if (basis_[i] < n_) x[basis_[i]] = t_(i, cols_);
    return x;
  }

  double objective_value() const { return -cost_(cols_); }
  long iterations() const { return iterations_; }

 private:
  int rows() const { return static_cast<int>(t_.rows()); }

  void pivot_loop(int allowed_cols) {
    const long cap = 200000;
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j)
        if (cost_(j) < -eps_) {
          enter = j;
          break;  // Bland: smallest index
        }
      if (enter < 0) return;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < rows(); ++i) {
        double a = t_(i, enter);
        if (a > eps_) {
          double ratio = t_(i, cols_) / a;
          if (leave < 0 || ratio < best - eps_ ||
              (ratio < best + eps_ && basis_[i] < basis_[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded program");
      pivot(leave, enter);
      if (++iterations_ > cap)
        throw std::runtime_error("simplex: iteration cap exceeded");
    }
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < rows(); ++i)
      if (i != row && std::abs(t_(i, col)) > 0) t_.row(i) -= t_(i, col) * t_.row(row);
    cost_ -= cost_(col) * t_.row(row);
    basis_[row] = col;
  }

  // Basic artificials at zero level are pivoted out onto any non-artificial
  // column; rows where none exists are redundant and neutralized.
  void drive_out_artificials() {
    for (int i = 0; i < rows(); ++i) {
      if (basis_[i] < art_begin_) continue;
      int col = -1;
      for (int j = 0; j < art_begin_; ++j)
        if (std::abs(t_(i, j)) > eps_) {
          col = j;
          break;
        }
      if (col >= 0)
        pivot(i, col);
      else
        t_.row(i).setZero();  // redundant constraint
    }
  }

  int n_, cols_, art_begin_;
  Eigen::MatrixXd t_;
  Eigen::RowVectorXd cost_;
  std::vector<int> basis_;
  double eps_ = 1e-9;
  long iterations_ = 0;
};

}  // namespace

SimplexResult simplex_feasible(const LinearProgram& lp) {
  Tableau t(lp);
  SimplexResult r;
  r.feasible = t.run_phase1();
  r.iterations = t.iterations();
  if (r.feasible) r.x = t.solution();
  return r;
}

SimplexResult simplex_minimize(const LinearProgram& lp) {
  if (!lp.objective)
    throw std::invalid_argument("simplex_minimize: objective required");
  if (static_cast<int>(lp.objective->size()) != lp.num_vars)
    throw std::invalid_argument("simplex_minimize: objective length mismatch");
  Tableau t(lp);
  SimplexResult r;
  r.feasible = t.run_phase1();
  if (r.feasible) {
    t.run_phase2(*lp.objective);
    r.x = t.solution();
    r.objective_value = t.objective_value();
  }
  r.iterations = t.iterations();
  return r;
}

}  // namespace snailbudget
