#include "esbid/linear_model.hpp"

#include <cmath>

namespace esbid {

int LinearModel::add_var(const std::string& name, VarKind kind, double lb,
                         double ub) {
  if (name.empty()) throw ModelError("variable name must not be empty");
  if (var_idx_.count(name)) throw ModelError("duplicate variable name: " + name);
  if (std::isnan(lb) || std::isnan(ub))
    throw ModelError("NaN bound on variable " + name);
  if (kind == VarKind::Binary && (lb < 0.0 || ub > 1.0))
    throw ModelError("binary variable " + name + " must keep bounds in [0,1]");
  const int idx = num_vars();
  vars_.push_back(Variable{name, kind, lb, ub});
  obj_.push_back(0.0);
  var_idx_.emplace(name, idx);
  if (kind == VarKind::Binary) ++num_binaries_;
  return idx;
}

int LinearModel::add_row(const std::string& name, std::vector<Term> terms,
                         RowSense sense, double rhs) {
  if (name.empty()) throw ModelError("row name must not be empty");
  if (row_idx_.count(name)) throw ModelError("duplicate row name: " + name);
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_vars())
      throw ModelError("row " + name + " references unknown variable index " +
                       std::to_string(t.var));
  }
  const int idx = num_rows();
  rows_.push_back(Constraint{name, std::move(terms), sense, rhs});
  row_idx_.emplace(name, idx);
  return idx;
}

void LinearModel::set_objective_coef(int var, double c) {
  obj_.at(static_cast<size_t>(var)) = c;
}

void LinearModel::add_objective_term(int var, double c) {
  obj_.at(static_cast<size_t>(var)) += c;
}

int LinearModel::var_index(const std::string& name) const {
  auto it = var_idx_.find(name);
  return it == var_idx_.end() ? -1 : it->second;
}

int LinearModel::row_index(const std::string& name) const {
  auto it = row_idx_.find(name);
  return it == row_idx_.end() ? -1 : it->second;
}

double LinearModel::eval_objective(const std::vector<double>& x) const {
  double s = obj_offset_;
  for (int j = 0; j < num_vars(); ++j) s += obj_[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
  return s;
}

double LinearModel::eval_row(int r, const std::vector<double>& x) const {
  double s = 0.0;
  for (const Term& t : rows_[static_cast<size_t>(r)].terms)
    s += t.coef * x[static_cast<size_t>(t.var)];
  return s;
}

void LinearModel::validate() const {
  for (const Variable& v : vars_) {
    if (v.lb > v.ub)
      throw ModelError("variable " + v.name + " has lb > ub");
    if (v.kind == VarKind::Binary && (v.lb < 0.0 || v.ub > 1.0))
      throw ModelError("binary variable " + v.name + " outside [0,1]");
  }
  for (const Constraint& c : rows_) {
    if (std::isnan(c.rhs)) throw ModelError("row " + c.name + " has NaN rhs");
    for (const Term& t : c.terms) {
      if (t.var < 0 || t.var >= num_vars())
        throw ModelError("row " + c.name + " references unknown variable");
      if (std::isnan(t.coef) || std::isinf(t.coef))
        throw ModelError("row " + c.name + " has non-finite coefficient");
    }
  }
}

int append_model(LinearModel& dst, const LinearModel& src,
                 const std::string& prefix) {
  const int offset = dst.num_vars();
  for (int j = 0; j < src.num_vars(); ++j) {
    const Variable& v = src.var(j);
    dst.add_var(prefix + v.name, v.kind, v.lb, v.ub);
  }
  for (const Constraint& c : src.rows()) {
    std::vector<Term> terms = c.terms;
    for (Term& t : terms) t.var += offset;
    dst.add_row(prefix + c.name, std::move(terms), c.sense, c.rhs);
  }
  return offset;
}

}  // namespace esbid
