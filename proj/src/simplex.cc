// Copyright 2026 The Benders Filter Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "benders/error.h"
#include "benders/lp.h"

namespace benders {
namespace {

// Reduced costs above -kOptTol count as nonnegative.
constexpr double kOptTol = 1e-9;
// Smallest tableau entry the ratio test accepts as a pivot; smaller entries
// are treated as cancellation noise.
constexpr double kRatioPivotTol = 1e-7;
// Row relaxation used by the first pass of the ratio test.
constexpr double kHarrisTol = 1e-9;
// Minimum pivots between rebuilds of the tableau from the original columns;
// the period grows with the row count.
constexpr int kReinvertPeriod = 1000;
// Pivots smaller than this are re-checked on a freshly rebuilt tableau.
constexpr double kSuspiciousPivot = 1e-5;
// Consecutive degenerate pivots before switching to Bland's rule.
constexpr int kDegeneracyStreak = 50;

// How an original variable is expressed through nonnegative standard-form
// columns: x = offset + sign * x' (one column), x = x+ - x- (free), or the
// constant `offset` (fixed, no column).
struct VarMap {
  enum class Kind { kShifted, kFree, kFixed } kind = Kind::kShifted;
  double offset = 0.0;
  double sign = 1.0;
  int col = -1;
  int neg_col = -1;
};

// min c^T x  s.t.  A x = b, x >= 0, b >= 0, built from a LinearProgram.
// Column layout: structural columns, then one slack per inequality row, then
// one artificial per row that has no +1 slack to start the basis with.
struct StandardForm {
  int m = 0;
  int num_structural = 0;
  int num_cols = 0;
  int first_artificial = 0;
  std::vector<double> a;  // m x num_cols, row-major
  std::vector<double> b;
  std::vector<double> cost;
  std::vector<int> initial_basis;
  // +1 or -1: the standard row is `row_sign` times the source row.
  std::vector<double> row_sign;
  // Number of leading standard rows that come from LinearProgram rows; the
  // rest encode finite upper bounds.
  int num_source_rows = 0;
  std::vector<VarMap> vars;

  double& at(int i, int j) { return a[static_cast<size_t>(i) * num_cols + j]; }
  double at(int i, int j) const {
    return a[static_cast<size_t>(i) * num_cols + j];
  }
  bool IsArtificial(int j) const { return j >= first_artificial; }
};

StandardForm BuildStandardForm(const LinearProgram& lp) {
  StandardForm sf;
  const int n = lp.num_vars();
  sf.vars.resize(n);
  int next_col = 0;
  std::vector<int> bounded_vars;  // shifted vars that also need x' <= u - l
  for (int j = 0; j < n; ++j) {
    VarMap& v = sf.vars[j];
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (std::isfinite(lo) && std::isfinite(hi) && lo == hi) {
      v.kind = VarMap::Kind::kFixed;
      v.offset = lo;
    } else if (std::isfinite(lo)) {
      v.kind = VarMap::Kind::kShifted;
      v.offset = lo;
      v.sign = 1.0;
      v.col = next_col++;
      if (std::isfinite(hi)) bounded_vars.push_back(j);
    } else if (std::isfinite(hi)) {
      v.kind = VarMap::Kind::kShifted;
      v.offset = hi;
      v.sign = -1.0;
      v.col = next_col++;
    } else {
      v.kind = VarMap::Kind::kFree;
      v.col = next_col++;
      v.neg_col = next_col++;
    }
  }
  sf.num_structural = next_col;
  sf.num_source_rows = lp.num_rows();
  sf.m = lp.num_rows() + static_cast<int>(bounded_vars.size());

  // Rows in "dense over structural columns" form before slacks are added.
  std::vector<std::vector<double>> rows(sf.m,
                                        std::vector<double>(sf.num_structural));
  std::vector<double> rhs(sf.m);
  std::vector<Relation> rel(sf.m);
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.rows[i];
    double r = row.rhs;
    for (int j = 0; j < n; ++j) {
      const double aij = row.coeffs[j];
      if (aij == 0.0) continue;
      const VarMap& v = sf.vars[j];
      switch (v.kind) {
        case VarMap::Kind::kFixed:
          r -= aij * v.offset;
          break;
        case VarMap::Kind::kShifted:
          r -= aij * v.offset;
          rows[i][v.col] += aij * v.sign;
          break;
        case VarMap::Kind::kFree:
          rows[i][v.col] += aij;
          rows[i][v.neg_col] -= aij;
          break;
      }
    }
    rhs[i] = r;
    rel[i] = row.relation;
  }
  for (size_t k = 0; k < bounded_vars.size(); ++k) {
    const int i = lp.num_rows() + static_cast<int>(k);
    const int j = bounded_vars[k];
    rows[i][sf.vars[j].col] = 1.0;
    rhs[i] = lp.upper[j] - lp.lower[j];
    rel[i] = Relation::kLessEqual;
  }

  int num_slacks = 0;
  for (int i = 0; i < sf.m; ++i) {
    if (rel[i] != Relation::kEqual) ++num_slacks;
  }
  sf.row_sign.assign(sf.m, 1.0);
  std::vector<bool> needs_artificial(sf.m, false);
  int num_artificial = 0;
  for (int i = 0; i < sf.m; ++i) {
    sf.row_sign[i] = rhs[i] < 0.0 ? -1.0 : 1.0;
    const bool slack_is_unit =
        (rel[i] == Relation::kLessEqual && sf.row_sign[i] > 0) ||
        (rel[i] == Relation::kGreaterEqual && sf.row_sign[i] < 0);
    if (!slack_is_unit) {
      needs_artificial[i] = true;
      ++num_artificial;
    }
  }
  sf.first_artificial = sf.num_structural + num_slacks;
  sf.num_cols = sf.first_artificial + num_artificial;
  sf.a.assign(static_cast<size_t>(sf.m) * sf.num_cols, 0.0);
  sf.b.resize(sf.m);
  sf.cost.assign(sf.num_cols, 0.0);
  sf.initial_basis.resize(sf.m);

  int slack_col = sf.num_structural;
  int art_col = sf.first_artificial;
  for (int i = 0; i < sf.m; ++i) {
    const double s = sf.row_sign[i];
    for (int j = 0; j < sf.num_structural; ++j) sf.at(i, j) = s * rows[i][j];
    sf.b[i] = s * rhs[i];
    int unit_col = -1;
    if (rel[i] != Relation::kEqual) {
      const double slack = rel[i] == Relation::kLessEqual ? 1.0 : -1.0;
      sf.at(i, slack_col) = s * slack;
      if (!needs_artificial[i]) unit_col = slack_col;
      ++slack_col;
    }
    if (needs_artificial[i]) {
      sf.at(i, art_col) = 1.0;
      unit_col = art_col++;
    }
    sf.initial_basis[i] = unit_col;
  }

  for (int j = 0; j < n; ++j) {
    const VarMap& v = sf.vars[j];
    if (v.kind == VarMap::Kind::kShifted) {
      sf.cost[v.col] = lp.objective[j] * v.sign;
    } else if (v.kind == VarMap::Kind::kFree) {
      sf.cost[v.col] = lp.objective[j];
      sf.cost[v.neg_col] = -lp.objective[j];
    }
  }
  return sf;
}

// Dense LU with partial pivoting; solves B x = r and B^T y = r for the same
// square matrix.
class DenseLu {
 public:
  explicit DenseLu(std::vector<double> mat, int n)
      : n_(n), lu_(std::move(mat)), perm_(n) {
    for (int i = 0; i < n_; ++i) perm_[i] = i;
    double scale = 0.0;
    for (double v : lu_) scale = std::max(scale, std::abs(v));
    for (int k = 0; k < n_; ++k) {
      int p = k;
      double best = std::abs(at(k, k));
      for (int i = k + 1; i < n_; ++i) {
        if (std::abs(at(i, k)) > best) {
          best = std::abs(at(i, k));
          p = i;
        }
      }
      if (best <= 1e-13 * std::max(1.0, scale)) {
        singular_ = true;
        return;
      }
      if (p != k) {
        for (int j = 0; j < n_; ++j) std::swap(at(k, j), at(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      const double pivot = at(k, k);
      for (int i = k + 1; i < n_; ++i) {
        const double f = at(i, k) / pivot;
        at(i, k) = f;
        if (f == 0.0) continue;
        for (int j = k + 1; j < n_; ++j) at(i, j) -= f * at(k, j);
      }
    }
  }

  bool singular() const { return singular_; }

  std::vector<double> Solve(const std::vector<double>& r) const {
    std::vector<double> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = r[perm_[i]];
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) x[i] -= at(i, j) * x[j];
      x[i] /= at(i, i);
    }
    return x;
  }

  std::vector<double> SolveTransposed(const std::vector<double>& r) const {
    // (P^T L U)^T y = r  =>  U^T L^T P y = r.
    std::vector<double> w(r);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) w[i] -= at(j, i) * w[j];
      w[i] /= at(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) w[i] -= at(j, i) * w[j];
    }
    std::vector<double> y(n_);
    for (int i = 0; i < n_; ++i) y[perm_[i]] = w[i];
    return y;
  }

 private:
  double& at(int i, int j) { return lu_[static_cast<size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return lu_[static_cast<size_t>(i) * n_ + j]; }

  int n_;
  std::vector<double> lu_;
  std::vector<int> perm_;
  bool singular_ = false;
};

// Full tableau with two reduced-cost rows (phase 1 and phase 2) kept in sync.
class Tableau {
 public:
  explicit Tableau(const StandardForm& sf)
      : sf_(sf),
        m_(sf.m),
        width_(sf.num_cols + 1),
        t_(sf.a.size() + sf.m, 0.0),
        d1_(width_, 0.0),
        d2_(width_, 0.0),
        basis_(sf.initial_basis) {
    sparse_rows_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < sf.num_cols; ++j) {
        at(i, j) = sf.at(i, j);
        if (sf.at(i, j) != 0.0) sparse_rows_[i].emplace_back(j, sf.at(i, j));
      }
      at(i, sf.num_cols) = sf.b[i];
    }
    // Phase 2 row: c_j - c_B B^-1 a_j with B = I.
    for (int j = 0; j < sf.num_cols; ++j) d2_[j] = sf.cost[j];
    for (int j = sf.first_artificial; j < sf.num_cols; ++j) d1_[j] = 1.0;
    for (int i = 0; i < m_; ++i) {
      const double c2 = sf.cost[basis_[i]];
      const double c1 = sf.IsArtificial(basis_[i]) ? 1.0 : 0.0;
      if (c1 == 0.0 && c2 == 0.0) continue;
      for (int j = 0; j < width_; ++j) {
        d1_[j] -= c1 * at(i, j);
        d2_[j] -= c2 * at(i, j);
      }
    }
  }

  enum class Outcome { kOptimal, kUnbounded };

  // Runs the simplex on the phase-1 (`phase_one`) or phase-2 reduced costs.
  Outcome Run(bool phase_one, int64_t& iterations, int64_t max_iterations) {
    std::vector<double>& d = phase_one ? d1_ : d2_;
    int degenerate_streak = 0;
    while (true) {
      const bool bland = degenerate_streak >= kDegeneracyStreak;
      int entering = -1;
      double best = -kOptTol;
      for (int j = 0; j < sf_.first_artificial; ++j) {
        if (d[j] < best) {
          entering = j;
          if (bland) break;
          best = d[j];
        }
      }
      if (entering < 0) return Outcome::kOptimal;

      int leaving = -1;
      double best_ratio = kInf;
      if (bland) {
        for (int i = 0; i < m_; ++i) {
          const double aiq = at(i, entering);
          if (aiq <= kRatioPivotTol) continue;
          const double ratio = std::max(0.0, at(i, sf_.num_cols)) / aiq;
          if (leaving < 0 || ratio < best_ratio - 1e-12 ||
              (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[leaving])) {
            leaving = i;
            best_ratio = ratio;
          }
        }
      } else {
        // Harris two-pass test: bound the step with slightly relaxed rows,
        // then take the largest pivot among rows blocking within that step.
        double bound = kInf;
        for (int i = 0; i < m_; ++i) {
          const double aiq = at(i, entering);
          if (aiq <= kRatioPivotTol) continue;
          bound = std::min(
              bound, (std::max(0.0, at(i, sf_.num_cols)) + kHarrisTol) / aiq);
        }
        double best_pivot = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double aiq = at(i, entering);
          if (aiq <= kRatioPivotTol) continue;
          const double ratio = std::max(0.0, at(i, sf_.num_cols)) / aiq;
          if (ratio <= bound && aiq > best_pivot) {
            leaving = i;
            best_ratio = ratio;
            best_pivot = aiq;
          }
        }
      }
      if (leaving < 0 || std::abs(at(leaving, entering)) < kSuspiciousPivot) {
        if (pivots_since_reinvert_ > 0) {
          Reinvert();
          continue;
        }
      }
      if (leaving < 0) return Outcome::kUnbounded;

      if (++iterations > max_iterations) {
        throw Error(ErrorCode::kNumericalFailure,
                    "simplex iteration limit reached (" +
                        std::to_string(max_iterations) + ")");
      }
      degenerate_streak = best_ratio <= 1e-12 ? degenerate_streak + 1 : 0;
      Pivot(leaving, entering);
      if (++pivots_since_reinvert_ >= std::max(kReinvertPeriod, 2 * m_))
        Reinvert();
    }
  }

  // Recomputes B^-1 [A | b] and both reduced-cost rows from the original
  // columns of the current basis, discarding accumulated rounding error.
  void Reinvert() {
    pivots_since_reinvert_ = 0;
    const int m = m_;
    std::vector<double> bmat(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        bmat[static_cast<size_t>(i) * m + k] = sf_.at(i, basis_[k]);
      }
    }
    DenseLu lu(std::move(bmat), m);
    if (lu.singular()) {
      throw Error(ErrorCode::kNumericalFailure,
                  "basis became singular during the simplex");
    }
    // binv[i * m + k] = (B^-1)_{ik}, filled column by column.
    std::vector<double> binv(static_cast<size_t>(m) * m);
    std::vector<double> unit(m, 0.0);
    for (int k = 0; k < m; ++k) {
      unit[k] = 1.0;
      const std::vector<double> col = lu.Solve(unit);
      unit[k] = 0.0;
      for (int i = 0; i < m; ++i) binv[static_cast<size_t>(i) * m + k] = col[i];
    }
    std::fill(t_.begin(), t_.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      double* row = &t_[static_cast<size_t>(i) * width_];
      for (int k = 0; k < m; ++k) {
        const double f = binv[static_cast<size_t>(i) * m + k];
        if (f == 0.0) continue;
        for (const auto& [j, v] : sparse_rows_[k]) row[j] += f * v;
        row[sf_.num_cols] += f * sf_.b[k];
      }
      for (int j = 0; j < width_; ++j) {
        if (std::abs(row[j]) < 1e-12) row[j] = 0.0;
      }
      row[basis_[i]] = 1.0;
    }
    std::vector<double> y1(m, 0.0), y2(m, 0.0);
    for (int k = 0; k < m; ++k) {
      const double c1 = sf_.IsArtificial(basis_[k]) ? 1.0 : 0.0;
      const double c2 = sf_.cost[basis_[k]];
      for (int i = 0; i < m; ++i) {
        const double bik = binv[static_cast<size_t>(k) * m + i];
        y1[i] += c1 * bik;
        y2[i] += c2 * bik;
      }
    }
    for (int j = 0; j < sf_.num_cols; ++j) {
      d1_[j] = sf_.IsArtificial(j) ? 1.0 : 0.0;
      d2_[j] = sf_.cost[j];
    }
    d1_[sf_.num_cols] = 0.0;
    d2_[sf_.num_cols] = 0.0;
    for (int k = 0; k < m; ++k) {
      for (const auto& [j, v] : sparse_rows_[k]) {
        d1_[j] -= y1[k] * v;
        d2_[j] -= y2[k] * v;
      }
      d1_[sf_.num_cols] -= y1[k] * sf_.b[k];
      d2_[sf_.num_cols] -= y2[k] * sf_.b[k];
    }
    for (int i = 0; i < m; ++i) {
      d1_[basis_[i]] = 0.0;
      d2_[basis_[i]] = 0.0;
    }
    if (artificials_cleared_) ClearRedundantRows();
  }

  void Pivot(int r, int q) {
    const double pivot = at(r, q);
    if (std::abs(pivot) <= kPivotTol) {
      throw Error(ErrorCode::kNumericalFailure,
                  "pivot magnitude below tolerance");
    }
    double* prow = &t_[static_cast<size_t>(r) * width_];
    const double inv = 1.0 / pivot;
    for (int j = 0; j < width_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    // Collect the nonzero pattern of the pivot row once; most rows are sparse.
    nz_.clear();
    for (int j = 0; j < width_; ++j) {
      if (prow[j] != 0.0) nz_.push_back(j);
    }
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[static_cast<size_t>(i) * width_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j : nz_) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    for (std::vector<double>* d : {&d1_, &d2_}) {
      const double f = (*d)[q];
      if (f == 0.0) continue;
      for (int j : nz_) (*d)[j] -= f * prow[j];
      (*d)[q] = 0.0;
    }
    basis_[r] = q;
  }

  // Pivots basic artificials out of the basis where a structural or slack
  // column can replace them; rows where none can are redundant.
  void DriveOutArtificials() {
    for (int i = 0; i < m_; ++i) {
      if (!sf_.IsArtificial(basis_[i])) continue;
      int best_col = -1;
      double best = 1e-7;
      for (int j = 0; j < sf_.first_artificial; ++j) {
        if (std::abs(at(i, j)) > best) {
          best = std::abs(at(i, j));
          best_col = j;
        }
      }
      if (best_col >= 0) Pivot(i, best_col);
    }
    artificials_cleared_ = true;
    ClearRedundantRows();
  }

  // Rows still holding an artificial are redundant; clear their numerical
  // noise so they never block a pivot.
  void ClearRedundantRows() {
    for (int i = 0; i < m_; ++i) {
      if (!sf_.IsArtificial(basis_[i])) continue;
      for (int j = 0; j < width_; ++j) {
        if (j != basis_[i]) at(i, j) = 0.0;
      }
    }
  }

  double PhaseOneObjective() const { return -d1_[sf_.num_cols]; }
  const std::vector<double>& phase_one_costs() const { return d1_; }
  const std::vector<int>& basis() const { return basis_; }
  double rhs(int i) const { return at(i, sf_.num_cols); }

 private:
  double& at(int i, int j) { return t_[static_cast<size_t>(i) * width_ + j]; }
  double at(int i, int j) const {
    return t_[static_cast<size_t>(i) * width_ + j];
  }

  const StandardForm& sf_;
  int m_;
  int width_;
  std::vector<double> t_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  std::vector<int> basis_;
  std::vector<int> nz_;
  std::vector<std::vector<std::pair<int, double>>> sparse_rows_;
  int pivots_since_reinvert_ = 0;
  bool artificials_cleared_ = false;
};

std::vector<double> MapPrimal(const StandardForm& sf,
                              const std::vector<double>& xs) {
  std::vector<double> x(sf.vars.size());
  for (size_t j = 0; j < sf.vars.size(); ++j) {
    const VarMap& v = sf.vars[j];
    switch (v.kind) {
      case VarMap::Kind::kFixed:
        x[j] = v.offset;
        break;
      case VarMap::Kind::kShifted:
        x[j] = v.offset + v.sign * xs[v.col];
        break;
      case VarMap::Kind::kFree:
        x[j] = xs[v.col] - xs[v.neg_col];
        break;
    }
  }
  return x;
}

std::vector<double> ReducedCosts(const LinearProgram& lp,
                                 std::span<const double> dual) {
  std::vector<double> d(lp.objective);
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (dual[i] == 0.0) continue;
    const auto& coeffs = lp.rows[i].coeffs;
    for (int j = 0; j < lp.num_vars(); ++j) d[j] -= dual[i] * coeffs[j];
  }
  return d;
}

double Scale(const LinearProgram& lp) {
  double scale = 1.0;
  for (const Row& row : lp.rows) scale = std::max(scale, std::abs(row.rhs));
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (std::isfinite(lp.lower[j])) {
      scale = std::max(scale, std::abs(lp.lower[j]));
    }
    if (std::isfinite(lp.upper[j])) {
      scale = std::max(scale, std::abs(lp.upper[j]));
    }
  }
  return scale;
}

// Primal values and row duals of the final basis, recomputed from the
// original columns so that tableau drift does not leak into the result.
struct BasisSolution {
  std::vector<double> xs;
  std::vector<double> ys;
};

std::optional<BasisSolution> RefactorBasis(const StandardForm& sf,
                                           const std::vector<int>& basis,
                                           const std::vector<double>& cost) {
  const int m = sf.m;
  std::vector<double> bmat(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      bmat[static_cast<size_t>(i) * m + k] = sf.at(i, basis[k]);
    }
  }
  DenseLu lu(std::move(bmat), m);
  if (lu.singular()) return std::nullopt;
  BasisSolution out;
  const std::vector<double> xb = lu.Solve(sf.b);
  out.xs.assign(sf.num_cols, 0.0);
  for (int k = 0; k < m; ++k) out.xs[basis[k]] = std::max(0.0, xb[k]);
  std::vector<double> cb(m);
  for (int k = 0; k < m; ++k) cb[k] = cost[basis[k]];
  out.ys = lu.SolveTransposed(cb);
  return out;
}

}  // namespace

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
  }
  return "Unknown";
}

LinearProgram LinearProgram::WithVariables(int num_vars) {
  LinearProgram lp;
  lp.objective.assign(num_vars, 0.0);
  lp.lower.assign(num_vars, 0.0);
  lp.upper.assign(num_vars, kInf);
  lp.var_types.assign(num_vars, VarType::kContinuous);
  return lp;
}

void LinearProgram::AddRow(std::vector<double> coeffs, Relation relation,
                           double rhs) {
  rows.push_back(Row{std::move(coeffs), relation, rhs});
}

void LinearProgram::Validate() const {
  const size_t n = objective.size();
  if (lower.size() != n || upper.size() != n || var_types.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "bound or type vectors do not match the objective length");
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].coeffs.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].coeffs.size()) +
                      " coefficients, expected " + std::to_string(n));
    }
    if (!std::isfinite(rows[i].rhs)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i) + " has a non-finite rhs");
    }
  }
  for (size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInf || upper[j] == -kInf) {
      throw Error(ErrorCode::kInvalidArgument,
                  "variable " + std::to_string(j) + " has invalid bounds");
    }
    if (var_types[j] == VarType::kBinary &&
        (lower[j] < 0.0 || upper[j] > 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "binary variable " + std::to_string(j) +
                      " has bounds outside [0, 1]");
    }
  }
}

LpSolution SolveLp(const LinearProgram& lp) {
  lp.Validate();
  const StandardForm sf = BuildStandardForm(lp);
  Tableau tableau(sf);
  LpSolution sol;
  const int64_t max_iterations =
      200 * static_cast<int64_t>(sf.m + sf.num_cols) + 10000;

  tableau.Run(/*phase_one=*/true, sol.simplex_iterations, max_iterations);
  const double infeasibility = tableau.PhaseOneObjective();
  if (infeasibility > kFeasTol) {
    // Phase-1 duals: y_i = c1(u_i) - d1(u_i) for the initial unit column u_i.
    const std::vector<double>& d1 = tableau.phase_one_costs();
    sol.status = LpStatus::kInfeasible;
    sol.farkas.assign(lp.num_rows(), 0.0);
    for (int i = 0; i < sf.num_source_rows; ++i) {
      const int u = sf.initial_basis[i];
      const double c1 = sf.IsArtificial(u) ? 1.0 : 0.0;
      sol.farkas[i] = -sf.row_sign[i] * (c1 - d1[u]);
    }
    return sol;
  }

  tableau.DriveOutArtificials();
  if (tableau.Run(/*phase_one=*/false, sol.simplex_iterations,
                  max_iterations) == Tableau::Outcome::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  std::vector<double> xs(sf.num_cols, 0.0);
  std::vector<double> ys(sf.m, 0.0);
  const std::optional<BasisSolution> refined =
      RefactorBasis(sf, tableau.basis(), sf.cost);
  if (!refined) {
    throw Error(ErrorCode::kNumericalFailure, "final basis is singular");
  }
  xs = refined->xs;
  ys = refined->ys;

  sol.status = LpStatus::kOptimal;
  sol.primal = MapPrimal(sf, xs);
  sol.dual.assign(lp.num_rows(), 0.0);
  for (int i = 0; i < sf.num_source_rows; ++i) {
    sol.dual[i] = sf.row_sign[i] * ys[i];
  }
  sol.reduced_costs = ReducedCosts(lp, sol.dual);
  sol.objective = lp.objective_offset;
  for (int j = 0; j < lp.num_vars(); ++j) {
    sol.objective += lp.objective[j] * sol.primal[j];
  }
  const double violation = MaxPrimalViolation(lp, sol.primal);
  if (violation > kFeasTol * Scale(lp)) {
    throw Error(ErrorCode::kNumericalFailure,
                "optimal basis violates the constraints by " +
                    std::to_string(violation));
  }
  return sol;
}

double MaxPrimalViolation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (const Row& row : lp.rows) {
    double lhs = 0.0;
    for (int j = 0; j < lp.num_vars(); ++j) lhs += row.coeffs[j] * x[j];
    double v = 0.0;
    switch (row.relation) {
      case Relation::kLessEqual:
        v = lhs - row.rhs;
        break;
      case Relation::kGreaterEqual:
        v = row.rhs - lhs;
        break;
      case Relation::kEqual:
        v = std::abs(lhs - row.rhs);
        break;
    }
    worst = std::max(worst, v);
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

namespace {

// min over the variable box of g^T x; -inf when unbounded below. Entries of
// magnitude below `zero_tol` are treated as exact zeros.
double BoxMinimum(const LinearProgram& lp, std::span<const double> g,
                  double zero_tol) {
  double total = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (std::abs(g[j]) <= zero_tol) continue;
    const double bound = g[j] > 0 ? lp.lower[j] : lp.upper[j];
    if (!std::isfinite(bound)) return -kInf;
    total += g[j] * bound;
  }
  return total;
}

}  // namespace

double DualObjective(const LinearProgram& lp, std::span<const double> dual) {
  double total = lp.objective_offset;
  for (int i = 0; i < lp.num_rows(); ++i) total += dual[i] * lp.rows[i].rhs;
  const std::vector<double> d = ReducedCosts(lp, dual);
  return total + BoxMinimum(lp, d, 1e-9);
}

double FarkasResidual(const LinearProgram& lp, std::span<const double> farkas) {
  if (static_cast<int>(farkas.size()) != lp.num_rows()) return kInf;
  double rhs = 0.0;
  std::vector<double> g(lp.num_vars(), 0.0);
  double scale = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double f = farkas[i];
    const Relation rel = lp.rows[i].relation;
    if ((rel == Relation::kLessEqual && f < -1e-12) ||
        (rel == Relation::kGreaterEqual && f > 1e-12)) {
      return kInf;
    }
    if (f == 0.0) continue;
    scale = std::max(scale, std::abs(f));
    rhs += f * lp.rows[i].rhs;
    for (int j = 0; j < lp.num_vars(); ++j) g[j] += f * lp.rows[i].coeffs[j];
  }
  const double box_min = BoxMinimum(lp, g, 1e-9 * std::max(1.0, scale));
  if (box_min == -kInf) return kInf;
  return rhs - box_min;
}

}  // namespace benders
