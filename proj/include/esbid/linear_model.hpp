#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "esbid/errors.hpp"

namespace esbid {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class RowSense { LE, EQ, GE };
enum class ObjSense { Minimize, Maximize };

struct Term {
  int var = -1;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = kInf;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
};

// Solver-agnostic model: named variables with bounds, sparse rows, one
// linear objective. Binaries must keep their bounds within [0,1].
class LinearModel {
 public:
  int add_var(const std::string& name, VarKind kind, double lb, double ub);
  int add_continuous(const std::string& name, double lb, double ub) {
    return add_var(name, VarKind::Continuous, lb, ub);
  }
  int add_binary(const std::string& name) {
    return add_var(name, VarKind::Binary, 0.0, 1.0);
  }
  int add_row(const std::string& name, std::vector<Term> terms, RowSense sense,
              double rhs);

  void set_objective_sense(ObjSense s) { obj_sense_ = s; }
  void set_objective_coef(int var, double c);
  void add_objective_term(int var, double c);
  void set_objective_offset(double c) { obj_offset_ = c; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const { return num_binaries_; }
  bool has_binaries() const { return num_binaries_ > 0; }

  const Variable& var(int j) const { return vars_[static_cast<size_t>(j)]; }
  Variable& var(int j) { return vars_[static_cast<size_t>(j)]; }
  const Constraint& row(int r) const { return rows_[static_cast<size_t>(r)]; }
  Constraint& row_mut(int r) { return rows_[static_cast<size_t>(r)]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Constraint>& rows() const { return rows_; }

  ObjSense objective_sense() const { return obj_sense_; }
  double objective_coef(int var) const { return obj_[static_cast<size_t>(var)]; }
  const std::vector<double>& objective() const { return obj_; }
  double objective_offset() const { return obj_offset_; }

  // -1 when absent.
  int var_index(const std::string& name) const;
  int row_index(const std::string& name) const;

  double eval_objective(const std::vector<double>& x) const;
  double eval_row(int r, const std::vector<double>& x) const;

  // Throws ModelError on a violated invariant (duplicate names are already
  // rejected at insertion; this checks bounds and term references).
  void validate() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> obj_;
  double obj_offset_ = 0.0;
  ObjSense obj_sense_ = ObjSense::Minimize;
  std::unordered_map<std::string, int> var_idx_;
  std::unordered_map<std::string, int> row_idx_;
  int num_binaries_ = 0;
};

// Copies every variable and row of `src` into `dst` with `prefix` prepended
// to the names. Returns the variable index offset (src var j -> offset + j).
int append_model(LinearModel& dst, const LinearModel& src,
                 const std::string& prefix);

}  // namespace esbid
