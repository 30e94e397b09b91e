#include "esbid/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "esbid/kernels.hpp"

namespace esbid {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

enum class VStat : unsigned char { Basic, AtLower, AtUpper, FreeNB };

// Bounded-variable revised simplex over min c'x, A x + s = b with an
// explicit dense basis inverse updated by Gauss-Jordan pivots. Columns are
// laid out as [structural | slack | artificial]; slack bounds encode the
// row sense. Reduced costs are maintained incrementally and refreshed
// periodically from a BTRAN pass.
class SimplexCore {
 public:
  SimplexCore(const LinearModel& model, const SimplexOptions& opt,
              const double* lb_override, const double* ub_override)
      : model_(model), opt_(opt) {
    m_ = model.num_rows();
    n_ = model.num_vars();
    build(lb_override, ub_override);
  }

  LpSolution run();

 private:
  // --- setup -------------------------------------------------------------
  void build(const double* lbo, const double* ubo);
  void start_basis();

  // --- linear algebra -----------------------------------------------------
  void ftran(int col, double* w) const;        // w = R * A_col
  void column_axpy(int col, double a, double* out) const;  // out += a*A_col
  double col_dot(const double* y, int col) const;
  void refresh_duals();
  void refresh_primal();
  void refactorize();
  bool ftran_residual_ok(int col, const double* w) const;

  // --- pivoting ------------------------------------------------------------
  int price() const;
  struct Ratio {
    double step = std::numeric_limits<double>::infinity();
    int row = -1;     // -1: entering variable blocks itself (bound flip)
    int bound = 0;    // -1 leaving hits lower, +1 hits upper
    bool unbounded = true;
  };
  Ratio ratio_test(int q, int sigma, const double* w) const;
  void pivot(int q, int sigma, const Ratio& r, double* w);

  // --- phases ---------------------------------------------------------------
  enum class LoopExit { Optimal, Unbounded, IterLimit };
  LoopExit iterate(bool phase1);
  bool setup_phase1();
  void finish_phase1_basis();
  double artificial_sum() const;

  LpSolution extract(LpStatus status);

  double bound_dist(int j) const {
    return ub_[j] - lb_[j];
  }
  bool fixed(int j) const { return lb_[j] == ub_[j]; }
  double* rrow(int i) { return rinv_.data() + static_cast<size_t>(i) * m_; }
  const double* rrow(int i) const {
    return rinv_.data() + static_cast<size_t>(i) * m_;
  }

  const LinearModel& model_;
  SimplexOptions opt_;
  int m_ = 0, n_ = 0;       // rows, structural columns
  int ncols_ = 0;           // n + m + artificials
  bool maximize_ = false;

  // structural columns, CSC
  std::vector<int> col_ptr_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> b_;

  std::vector<double> lb_, ub_;    // all columns
  std::vector<double> cost_;      // phase-2 cost, all columns (internal min)
  std::vector<double> pcost_;     // active cost vector (phase 1 or 2)
  std::vector<int> art_row_;      // artificial -> row
  std::vector<double> art_sig_;   // artificial column sign
  int art_begin_ = 0;             // first artificial column id

  std::vector<int> basis_;        // row -> column
  std::vector<int> in_row_;       // column -> row or -1
  std::vector<VStat> vstat_;
  std::vector<double> xval_;
  std::vector<double> rinv_;      // m*m row-major basis inverse
  std::vector<double> d_;         // reduced costs
  std::vector<double> y_;         // duals of active cost (refresh)
  mutable std::vector<double> wbuf_, tmp_;

  bool phase1_ = false;
  bool bland_ = false;
  int degenerate_run_ = 0;
  long iter_ = 0;
  long max_iter_ = 0;
  int refactor_count_ = 0;
  int validate_retries_ = 0;
  double bscale_ = 1.0;
};

void SimplexCore::build(const double* lbo, const double* ubo) {
  maximize_ = model_.objective_sense() == ObjSense::Maximize;
  ncols_ = n_ + m_;
  art_begin_ = ncols_;

  col_ptr_.assign(n_ + 1, 0);
  for (const Constraint& c : model_.rows())
    for (const Term& t : c.terms) ++col_ptr_[t.var + 1];
  for (int j = 0; j < n_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  col_row_.resize(col_ptr_[n_]);
  col_val_.resize(col_ptr_[n_]);
  {
    std::vector<int> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (int r = 0; r < m_; ++r)
      for (const Term& t : model_.row(r).terms) {
        const int p = fill[t.var]++;
        col_row_[p] = r;
        col_val_[p] = t.coef;
      }
  }

  b_.resize(m_);
  lb_.assign(ncols_, 0.0);
  ub_.assign(ncols_, kInf);
  cost_.assign(ncols_, 0.0);
  for (int j = 0; j < n_; ++j) {
    const Variable& v = model_.var(j);
    lb_[j] = lbo ? lbo[j] : v.lb;
    ub_[j] = ubo ? ubo[j] : v.ub;
    cost_[j] = maximize_ ? -model_.objective_coef(j) : model_.objective_coef(j);
  }
  bscale_ = 1.0;
  for (int r = 0; r < m_; ++r) {
    const Constraint& c = model_.row(r);
    b_[r] = c.rhs;
    bscale_ = std::max(bscale_, std::fabs(c.rhs));
    const int s = n_ + r;
    switch (c.sense) {
      case RowSense::LE: lb_[s] = 0.0; ub_[s] = kInf; break;
      case RowSense::GE: lb_[s] = -kInf; ub_[s] = 0.0; break;
      case RowSense::EQ: lb_[s] = 0.0; ub_[s] = 0.0; break;
    }
  }
  max_iter_ = opt_.max_iter > 0
                  ? opt_.max_iter
                  : 2000 + 40L * (static_cast<long>(m_) + n_);
  if (opt_.bland_trigger <= 0) opt_.bland_trigger = std::max(200, m_);
}

void SimplexCore::column_axpy(int col, double a, double* out) const {
  if (col < n_) {
    for (int p = col_ptr_[col]; p < col_ptr_[col + 1]; ++p)
      out[col_row_[p]] += a * col_val_[p];
  } else if (col < art_begin_) {
    out[col - n_] += a;
  } else {
    out[art_row_[col - art_begin_]] += a * art_sig_[col - art_begin_];
  }
}

double SimplexCore::col_dot(const double* y, int col) const {
  if (col < n_) {
    double s = 0.0;
    for (int p = col_ptr_[col]; p < col_ptr_[col + 1]; ++p)
      s += y[col_row_[p]] * col_val_[p];
    return s;
  }
  if (col < art_begin_) return y[col - n_];
  return y[art_row_[col - art_begin_]] * art_sig_[col - art_begin_];
}

void SimplexCore::ftran(int col, double* w) const {
  if (col < n_) {
    std::memset(w, 0, sizeof(double) * static_cast<size_t>(m_));
    const int p0 = col_ptr_[col], p1 = col_ptr_[col + 1];
    for (int i = 0; i < m_; ++i) {
      const double* ri = rrow(i);
      double s = 0.0;
      for (int p = p0; p < p1; ++p) s += ri[col_row_[p]] * col_val_[p];
      w[i] = s;
    }
  } else {
    int k;
    double sg = 1.0;
    if (col < art_begin_) {
      k = col - n_;
    } else {
      k = art_row_[col - art_begin_];
      sg = art_sig_[col - art_begin_];
    }
    for (int i = 0; i < m_; ++i) w[i] = sg * rrow(i)[k];
  }
}

bool SimplexCore::ftran_residual_ok(int col, const double* w) const {
  tmp_.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i)
    if (w[i] != 0.0) column_axpy(basis_[i], w[i], tmp_.data());
  column_axpy(col, -1.0, tmp_.data());
  const double res = kern::abs_max(tmp_.data(), m_);
  return res <= 1e-7 * (1.0 + bscale_);
}

void SimplexCore::refresh_duals() {
  y_.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const double cb = pcost_[basis_[i]];
    if (cb != 0.0) kern::axpy(cb, rrow(i), y_.data(), m_);
  }
  d_.assign(ncols_, 0.0);
  for (int j = 0; j < ncols_; ++j) {
    if (vstat_[j] == VStat::Basic) continue;
    d_[j] = pcost_[j] - col_dot(y_.data(), j);
  }
}

void SimplexCore::refresh_primal() {
  tmp_ = b_;
  for (int j = 0; j < ncols_; ++j) {
    if (vstat_[j] == VStat::Basic || xval_[j] == 0.0) continue;
    column_axpy(j, -xval_[j], tmp_.data());
  }
  for (int i = 0; i < m_; ++i)
    xval_[basis_[i]] = kern::dot(rrow(i), tmp_.data(), m_);
}

void SimplexCore::refactorize() {
  ++refactor_count_;
  std::vector<double> w(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    tmp_.assign(m_, 0.0);
    column_axpy(basis_[i], 1.0, tmp_.data());
    for (int r = 0; r < m_; ++r) w[static_cast<size_t>(r) * m_ + i] = tmp_[r];
  }
  rinv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) rinv_[static_cast<size_t>(i) * m_ + i] = 1.0;
  for (int k = 0; k < m_; ++k) {
    int piv = k;
    double best = std::fabs(w[static_cast<size_t>(k) * m_ + k]);
    for (int i = k + 1; i < m_; ++i) {
      const double v = std::fabs(w[static_cast<size_t>(i) * m_ + k]);
      if (v > best) { best = v; piv = i; }
    }
    if (best < 1e-12)
      throw SolverError("numerically singular basis during refactorization "
                        "(pivot column " + std::to_string(k) + ")");
    if (piv != k) {
      for (int c = 0; c < m_; ++c) {
        std::swap(w[static_cast<size_t>(piv) * m_ + c],
                  w[static_cast<size_t>(k) * m_ + c]);
        std::swap(rinv_[static_cast<size_t>(piv) * m_ + c],
                  rinv_[static_cast<size_t>(k) * m_ + c]);
      }
    }
    const double inv = 1.0 / w[static_cast<size_t>(k) * m_ + k];
    kern::scale(inv, &w[static_cast<size_t>(k) * m_], m_);
    kern::scale(inv, &rinv_[static_cast<size_t>(k) * m_], m_);
    for (int i = 0; i < m_; ++i) {
      if (i == k) continue;
      const double f = w[static_cast<size_t>(i) * m_ + k];
      if (f == 0.0) continue;
      kern::axpy(-f, &w[static_cast<size_t>(k) * m_],
                 &w[static_cast<size_t>(i) * m_], m_);
      kern::axpy(-f, &rinv_[static_cast<size_t>(k) * m_],
                 &rinv_[static_cast<size_t>(i) * m_], m_);
    }
  }
}

void SimplexCore::start_basis() {
  vstat_.assign(ncols_, VStat::AtLower);
  xval_.assign(ncols_, 0.0);
  in_row_.assign(ncols_, -1);
  for (int j = 0; j < ncols_; ++j) {
    if (std::isfinite(lb_[j])) {
      vstat_[j] = VStat::AtLower;
      xval_[j] = lb_[j];
    } else if (std::isfinite(ub_[j])) {
      vstat_[j] = VStat::AtUpper;
      xval_[j] = ub_[j];
    } else {
      vstat_[j] = VStat::FreeNB;
      xval_[j] = 0.0;
    }
  }
  basis_.assign(m_, -1);
}

bool SimplexCore::setup_phase1() {
  start_basis();
  // slack value implied by the nonbasic structural point
  std::vector<double> act(m_, 0.0);
  for (int j = 0; j < n_; ++j)
    if (xval_[j] != 0.0) column_axpy(j, xval_[j], act.data());

  art_row_.clear();
  art_sig_.clear();
  bool need_art = false;
  for (int r = 0; r < m_; ++r) {
    const int s = n_ + r;
    const double sval = b_[r] - act[r];
    const double tol = opt_.feas_tol * (1.0 + std::fabs(b_[r]));
    if (sval >= lb_[s] - tol && sval <= ub_[s] + tol) {
      basis_[r] = s;
      vstat_[s] = VStat::Basic;
      in_row_[s] = r;
      xval_[s] = sval;
    } else {
      const double clamped = std::min(std::max(sval, lb_[s]), ub_[s]);
      xval_[s] = clamped;
      vstat_[s] = (clamped == lb_[s]) ? VStat::AtLower : VStat::AtUpper;
      const double resid = sval - clamped;
      const int a = ncols_ + static_cast<int>(art_row_.size());
      art_row_.push_back(r);
      art_sig_.push_back(resid >= 0.0 ? 1.0 : -1.0);
      basis_[r] = a;
      need_art = true;
    }
  }
  const int nart = static_cast<int>(art_row_.size());
  if (nart > 0) {
    lb_.resize(ncols_ + nart, 0.0);
    ub_.resize(ncols_ + nart, kInf);
    cost_.resize(ncols_ + nart, 0.0);
    xval_.resize(ncols_ + nart, 0.0);
    vstat_.resize(ncols_ + nart, VStat::Basic);
    in_row_.resize(ncols_ + nart, -1);
    ncols_ += nart;
    for (int k = 0; k < nart; ++k) {
      const int a = art_begin_ + k;
      const int r = art_row_[k];
      in_row_[a] = r;
      vstat_[a] = VStat::Basic;
      // artificial column is sig*e_r, so R = B^{-1} starts as diag(sig)
      xval_[a] = std::fabs(b_[r] - act[r] - xval_[n_ + r]);
    }
  }
  rinv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double diag = 1.0;
    if (basis_[i] >= art_begin_) diag = art_sig_[basis_[i] - art_begin_];
    rinv_[static_cast<size_t>(i) * m_ + i] = diag;
  }
  for (int i = 0; i < m_; ++i) in_row_[basis_[i]] = i;
  return need_art;
}

double SimplexCore::artificial_sum() const {
  double s = 0.0;
  for (int k = 0; k < static_cast<int>(art_row_.size()); ++k)
    s += std::fabs(xval_[art_begin_ + k]);
  return s;
}

int SimplexCore::price() const {
  int best = -1;
  double best_score = opt_.opt_tol;
  for (int j = 0; j < ncols_; ++j) {
    if (vstat_[j] == VStat::Basic || fixed(j) || j >= art_begin_) continue;
    const double dj = d_[j];
    double score = 0.0;
    switch (vstat_[j]) {
      case VStat::AtLower: score = -dj; break;
      case VStat::AtUpper: score = dj; break;
      case VStat::FreeNB: score = std::fabs(dj); break;
      default: break;
    }
    if (score <= best_score) continue;
    if (bland_) return j;  // lowest eligible index
    best_score = score;
    best = j;
  }
  return best;
}

SimplexCore::Ratio SimplexCore::ratio_test(int q, int sigma,
                                           const double* w) const {
  Ratio out;
  out.unbounded = true;
  double best = kInf;
  int best_row = -1, best_bound = 0;
  double best_piv = 0.0;
  const double flip = bound_dist(q);
  if (std::isfinite(flip)) {
    best = flip;
    best_row = -1;
    out.unbounded = false;
  }
  for (int i = 0; i < m_; ++i) {
    const double g = -sigma * w[i];  // d x_Bi / d step
    if (std::fabs(g) <= opt_.pivot_tol) continue;
    const int bj = basis_[i];
    double room, bnd;
    if (g > 0.0) {
      if (!std::isfinite(ub_[bj])) continue;
      room = ub_[bj] - xval_[bj];
      bnd = +1;
    } else {
      if (!std::isfinite(lb_[bj])) continue;
      room = xval_[bj] - lb_[bj];
      bnd = -1;
    }
    if (room < 0.0) room = 0.0;
    const double ratio = room / std::fabs(g);
    const double tie = 1e-9 * (1.0 + std::min(best, ratio));
    bool take = false;
    if (ratio < best - tie) {
      take = true;
    } else if (ratio <= best + tie && best_row >= 0) {
      if (bland_) {
        take = basis_[i] < basis_[best_row];
      } else {
        take = std::fabs(w[i]) > std::fabs(best_piv) + 1e-30 ||
               (std::fabs(w[i]) == std::fabs(best_piv) && i < best_row);
      }
    }
    if (take) {
      best = ratio;
      best_row = i;
      best_bound = static_cast<int>(bnd);
      best_piv = w[i];
      out.unbounded = false;
    }
  }
  out.step = best;
  out.row = best_row;
  out.bound = best_bound;
  return out;
}

void SimplexCore::pivot(int q, int sigma, const Ratio& r, double* w) {
  const double delta = r.step;
  if (delta != 0.0) {
    for (int i = 0; i < m_; ++i) {
      if (w[i] == 0.0) continue;
      xval_[basis_[i]] -= sigma * delta * w[i];
    }
    xval_[q] += sigma * delta;
  }
  if (r.row < 0) {  // bound flip
    vstat_[q] = (vstat_[q] == VStat::AtLower) ? VStat::AtUpper : VStat::AtLower;
    xval_[q] = (vstat_[q] == VStat::AtLower) ? lb_[q] : ub_[q];
    return;
  }
  const int row = r.row;
  const int leave = basis_[row];
  const double wq = w[row];
  const double dq = d_[q];
  const double rate = dq / wq;

  // reduced-cost update needs the pivot row of the OLD inverse
  tmp_.assign(rrow(row), rrow(row) + m_);
  for (int j = 0; j < ncols_; ++j) {
    if (vstat_[j] == VStat::Basic || fixed(j)) continue;
    const double alpha = col_dot(tmp_.data(), j);
    if (alpha != 0.0) d_[j] -= rate * alpha;
  }
  d_[leave] = -rate;
  d_[q] = 0.0;

  // snap the leaving variable onto its blocking bound
  xval_[leave] = (r.bound > 0) ? ub_[leave] : lb_[leave];
  vstat_[leave] = (r.bound > 0) ? VStat::AtUpper : VStat::AtLower;
  in_row_[leave] = -1;
  basis_[row] = q;
  in_row_[q] = row;
  vstat_[q] = VStat::Basic;
  if (leave >= art_begin_) {  // artificial never re-enters
    lb_[leave] = ub_[leave] = 0.0;
    xval_[leave] = 0.0;
  }

  // Gauss-Jordan update of the explicit inverse
  double* pr = rrow(row);
  kern::scale(1.0 / wq, pr, m_);
  for (int i = 0; i < m_; ++i) {
    if (i == row || w[i] == 0.0) continue;
    kern::axpy(-w[i], pr, rrow(i), m_);
  }
}

SimplexCore::LoopExit SimplexCore::iterate(bool phase1) {
  phase1_ = phase1;
  refresh_duals();
  refresh_primal();
  wbuf_.assign(m_, 0.0);
  int since_refresh = 0;
  int since_check = 0;
  while (true) {
    if (iter_ >= max_iter_) return LoopExit::IterLimit;
    if (phase1 && artificial_sum() <= 1e-10 * (1.0 + bscale_)) {
      refresh_primal();
      if (artificial_sum() <= 1e-9 * (1.0 + bscale_)) return LoopExit::Optimal;
    }
    if (since_refresh >= opt_.refresh_interval) {
      refresh_duals();
      refresh_primal();
      since_refresh = 0;
    }
    const int q = price();
    if (q < 0) {
      // confirm optimality against freshly computed reduced costs
      refresh_duals();
      const int q2 = price();
      if (q2 < 0) return LoopExit::Optimal;
      since_refresh = 0;
      continue;
    }
    const int sigma =
        (vstat_[q] == VStat::AtUpper || (vstat_[q] == VStat::FreeNB && d_[q] > 0.0))
            ? -1
            : +1;
    ftran(q, wbuf_.data());
    if (++since_check >= opt_.residual_check_interval) {
      since_check = 0;
      if (!ftran_residual_ok(q, wbuf_.data())) {
        refactorize();
        refresh_duals();
        refresh_primal();
        ftran(q, wbuf_.data());
      }
    }
    const Ratio r = ratio_test(q, sigma, wbuf_.data());
    if (r.unbounded) {
      if (phase1) {
        // cannot happen for a sound phase-1 objective; treat as breakdown
        throw SolverError("phase-1 unbounded direction (column " +
                          std::to_string(q) + ")");
      }
      return LoopExit::Unbounded;
    }
    pivot(q, sigma, r, wbuf_.data());
    ++iter_;
    ++since_refresh;
    if (r.step <= 1e-11 * (1.0 + bscale_)) {
      if (++degenerate_run_ > opt_.bland_trigger) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }
  }
}

void SimplexCore::finish_phase1_basis() {
  // fix all artificials at zero; pivot basic ones out where possible
  for (int k = 0; k < static_cast<int>(art_row_.size()); ++k) {
    const int a = art_begin_ + k;
    lb_[a] = ub_[a] = 0.0;
    if (vstat_[a] != VStat::Basic) xval_[a] = 0.0;
  }
  for (int i = 0; i < m_; ++i) {
    const int a = basis_[i];
    if (a < art_begin_) continue;
    tmp_.assign(rrow(i), rrow(i) + m_);
    int enter = -1;
    double best = opt_.pivot_tol;
    for (int j = 0; j < art_begin_; ++j) {
      if (vstat_[j] == VStat::Basic || fixed(j)) continue;
      const double alpha = std::fabs(col_dot(tmp_.data(), j));
      if (alpha > best) {
        best = alpha;
        enter = j;
        if (alpha > 0.1) break;  // good enough pivot
      }
    }
    if (enter < 0) continue;  // redundant row: artificial stays basic at 0
    ftran(enter, wbuf_.data());
    Ratio r;
    r.step = 0.0;
    r.row = i;
    r.bound = -1;
    r.unbounded = false;
    pivot(enter, +1, r, wbuf_.data());
  }
}

LpSolution SimplexCore::extract(LpStatus status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iter_;
  sol.refactorizations = refactor_count_;
  if (status != LpStatus::Optimal && status != LpStatus::Unbounded &&
      status != LpStatus::Infeasible)
    return sol;
  sol.x.assign(xval_.begin(), xval_.begin() + n_);
  if (status != LpStatus::Optimal) return sol;

  pcost_ = cost_;
  refresh_duals();
  const double flip = maximize_ ? -1.0 : 1.0;
  sol.row_dual.resize(m_);
  for (int r = 0; r < m_; ++r) sol.row_dual[r] = flip * y_[r];
  sol.reduced_cost.resize(n_);
  for (int j = 0; j < n_; ++j) sol.reduced_cost[j] = flip * d_[j];
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * xval_[j];
  sol.objective = flip * obj + model_.objective_offset();
  return sol;
}

LpSolution SimplexCore::run() {
  for (int j = 0; j < n_; ++j) {
    if (lb_[j] > ub_[j] + 1e-12) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      sol.note = "conflicting bounds on variable " + model_.var(j).name;
      return sol;
    }
    if (lb_[j] > ub_[j]) ub_[j] = lb_[j];
  }

  const bool need_phase1 = setup_phase1();
  if (need_phase1) {
    pcost_.assign(ncols_, 0.0);
    for (int k = 0; k < static_cast<int>(art_row_.size()); ++k)
      pcost_[art_begin_ + k] = 1.0;
    const LoopExit e = iterate(true);
    if (e == LoopExit::IterLimit) {
      LpSolution sol = extract(LpStatus::IterLimit);
      sol.note = "iteration limit during phase 1";
      return sol;
    }
    refresh_primal();
    bool ok = true;
    std::vector<int> bad;
    for (int k = 0; k < static_cast<int>(art_row_.size()); ++k) {
      const int r = art_row_[k];
      if (std::fabs(xval_[art_begin_ + k]) >
          opt_.feas_tol * (1.0 + std::fabs(b_[r]))) {
        ok = false;
        bad.push_back(r);
      }
    }
    if (!ok) {
      LpSolution sol = extract(LpStatus::Infeasible);
      sol.infeasible_rows = std::move(bad);
      sol.note = "phase-1 infeasibility " + std::to_string(artificial_sum());
      return sol;
    }
    finish_phase1_basis();
  }

  pcost_ = cost_;
  bland_ = false;
  degenerate_run_ = 0;
  while (true) {
    const LoopExit e = iterate(false);
    if (e == LoopExit::IterLimit) {
      LpSolution sol = extract(LpStatus::IterLimit);
      sol.note = "iteration limit during phase 2";
      return sol;
    }
    if (e == LoopExit::Unbounded) return extract(LpStatus::Unbounded);

    // self-validation: primal feasibility of basics and bound integrity
    refresh_primal();
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int bj = basis_[i];
      double v = 0.0;
      if (xval_[bj] < lb_[bj]) v = lb_[bj] - xval_[bj];
      if (xval_[bj] > ub_[bj]) v = std::max(v, xval_[bj] - ub_[bj]);
      worst = std::max(worst, v);
    }
    if (worst <= opt_.feas_tol * (1.0 + bscale_) * 10.0)
      return extract(LpStatus::Optimal);
    if (++validate_retries_ > 2)
      throw SolverError("lost primal feasibility after optimality (residual " +
                        std::to_string(worst) + ")");
    refactorize();
    pcost_ = cost_;
    refresh_duals();
    refresh_primal();
  }
}

}  // namespace

LpSolution solve_lp(const LinearModel& model, const SimplexOptions& opt) {
  SimplexCore core(model, opt, nullptr, nullptr);
  return core.run();
}

LpSolution solve_lp_bounded(const LinearModel& model,
                            const std::vector<double>& lb,
                            const std::vector<double>& ub,
                            const SimplexOptions& opt) {
  if (static_cast<int>(lb.size()) != model.num_vars() ||
      static_cast<int>(ub.size()) != model.num_vars())
    throw ModelError("bound override size mismatch");
  SimplexCore core(model, opt, lb.data(), ub.data());
  return core.run();
}

double duality_gap(const LinearModel& model, const LpSolution& sol) {
  if (!sol.optimal()) return std::numeric_limits<double>::quiet_NaN();
  // dual objective = y'b + sum over nonbasic-at-bound reduced costs * value;
  // recomputed here from the reported duals only.
  double dualobj = model.objective_offset();
  for (int r = 0; r < model.num_rows(); ++r)
    dualobj += sol.row_dual[r] * model.row(r).rhs;
  for (int j = 0; j < model.num_vars(); ++j)
    dualobj += sol.reduced_cost[j] * sol.x[j];
  return std::fabs(sol.objective - dualobj);
}

}  // namespace esbid
