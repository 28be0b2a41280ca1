#include "qfb/var_table.hpp"

#include <set>

#include "qfb/error.hpp"

namespace qfb {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "division_by_zero";
    case ErrorCode::VarTableMismatch: return "var_table_mismatch";
    case ErrorCode::NoShiftVariable: return "no_shift_variable";
    case ErrorCode::SingularEvaluation: return "singular_evaluation";
    case ErrorCode::NotCompatible: return "not_compatible";
    case ErrorCode::InsufficientData: return "insufficient_data";
    case ErrorCode::BudgetExceeded: return "budget_exceeded";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Inconsistent: return "inconsistent";
  }
  return "unknown";
}

ShiftKind ShiftKind::geometric(int e) {
  if (e < 1) throw Error(ErrorCode::InvalidArgument, "geometric shift needs e >= 1");
  return {Kind::Geometric, e};
}

VarTablePtr VarTable::make(std::vector<std::string> params) {
  std::shared_ptr<VarTable> t(new VarTable());
  std::set<std::string> seen{"q"};
  for (const auto& p : params) {
    if (p.empty() || !seen.insert(p).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate or empty symbol '" + p + "'");
  }
  if (params.size() + 2 > kMaxVars) throw Error(ErrorCode::InvalidArgument, "too many parameters");
  t->params_ = std::move(params);
  t->names_.push_back("q");
  for (const auto& p : t->params_) t->names_.push_back(p);
  return t;
}

VarTablePtr VarTable::make(std::vector<std::string> params, std::string shiftName, ShiftKind kind) {
  for (const auto& p : params)
    if (p == shiftName) throw Error(ErrorCode::InvalidArgument, "shift variable clashes with parameter");
  if (shiftName == "q") throw Error(ErrorCode::InvalidArgument, "shift variable cannot be q");
  auto base = make(std::move(params));
  std::shared_ptr<VarTable> t(new VarTable(*base));
  t->names_.push_back(shiftName);
  t->shift_ = kind;
  return t;
}

std::optional<std::size_t> VarTable::indexOf(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t VarTable::shiftSlot() const {
  if (!shift_) throw Error(ErrorCode::NoShiftVariable, "no shift variable declared");
  return names_.size() - 1;
}

const ShiftKind& VarTable::shiftKind() const {
  if (!shift_) throw Error(ErrorCode::NoShiftVariable, "no shift variable declared");
  return *shift_;
}

const std::string& VarTable::shiftName() const {
  if (!shift_) throw Error(ErrorCode::NoShiftVariable, "no shift variable declared");
  return names_.back();
}

VarTablePtr VarTable::base() const { return make(params_); }

VarTablePtr VarTable::withShift(const std::string& name, ShiftKind kind) const {
  return make(params_, name, kind);
}

bool VarTable::operator==(const VarTable& o) const {
  return names_ == o.names_ && shift_ == o.shift_;
}

bool sameTable(const VarTablePtr& a, const VarTablePtr& b) { return a == b || *a == *b; }

void requireSameTable(const VarTablePtr& a, const VarTablePtr& b) {
  if (!sameTable(a, b)) throw Error(ErrorCode::VarTableMismatch, "variable tables differ");
}

}  // namespace qfb
