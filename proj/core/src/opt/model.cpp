#include "stltube/opt/model.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stltube::opt {

int OptModel::add_var(double lo, double up, VarKind kind, std::string name) {
  if (frozen_) throw std::logic_error("OptModel: add_var after freeze");
  if (std::isnan(lo) || std::isnan(up) || lo > up)
    throw std::invalid_argument("OptModel: bad variable bounds");
  if (kind == VarKind::Binary) {
    if (lo < 0.0 || up > 1.0) throw std::invalid_argument("OptModel: binary bounds must be within {0,1}");
    ++num_binaries_;
  }
  vars_.push_back({lo, up, kind, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

static std::vector<LinTerm> merge_terms(const std::vector<LinTerm>& in, int num_vars) {
  std::map<int, double> acc;
  for (const auto& t : in) {
    if (t.var < 0 || t.var >= num_vars) throw std::out_of_range("OptModel: term references undeclared variable");
    if (!std::isfinite(t.coef)) throw std::invalid_argument("OptModel: non-finite coefficient");
    acc[t.var] += t.coef;
  }
  std::vector<LinTerm> out;
  out.reserve(acc.size());
  for (const auto& [v, c] : acc)
    if (c != 0.0) out.push_back({v, c});
  return out;
}

int OptModel::add_row(const LinExpr& e, RowSense sense, double rhs, RowTag tag) {
  if (frozen_) throw std::logic_error("OptModel: add_row after freeze");
  RowInfo r;
  r.terms = merge_terms(e.terms, num_vars());
  r.sense = sense;
  r.rhs = rhs - e.constant;
  if (!std::isfinite(r.rhs)) throw std::invalid_argument("OptModel: non-finite rhs");
  r.tag = std::move(tag);
  rows_.push_back(std::move(r));
  return static_cast<int>(rows_.size()) - 1;
}

void OptModel::set_bounds(int var, double lo, double up) {
  if (frozen_) throw std::logic_error("OptModel: set_bounds after freeze");
  if (var < 0 || var >= num_vars()) throw std::out_of_range("OptModel: set_bounds variable");
  if (std::isnan(lo) || std::isnan(up) || lo > up) throw std::invalid_argument("OptModel: bad bounds");
  vars_[var].lo = lo;
  vars_[var].up = up;
}

void OptModel::set_objective(ObjSense sense, const LinExpr& e) {
  if (frozen_) throw std::logic_error("OptModel: set_objective after freeze");
  obj_sense_ = sense;
  obj_.assign(vars_.size(), 0.0);
  for (const auto& t : merge_terms(e.terms, num_vars())) obj_[t.var] = t.coef;
  obj_const_ = e.constant;
}

void OptModel::freeze() {
  if (obj_.size() != vars_.size()) obj_.resize(vars_.size(), 0.0);
  frozen_ = true;
}

void OptModel::add_rhs_sensitivity(int row, int param, double coef) {
  if (row < 0 || row >= num_rows()) throw std::out_of_range("OptModel: sensitivity row");
  rhs_sens_.push_back({row, param, coef});
}

}  // namespace stltube::opt
