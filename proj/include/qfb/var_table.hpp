#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qfb {

inline constexpr std::size_t kMaxVars = 8;

// Action of the forward shift on the distinguished variable v.
struct ShiftKind {
  enum class Kind { Geometric, Arithmetic };
  Kind kind = Kind::Geometric;
  int e = 1;  // geometric: v -> q^e v

  static ShiftKind geometric(int e = 1);
  static ShiftKind arithmetic() { return {Kind::Arithmetic, 0}; }
  bool isGeometric() const { return kind == Kind::Geometric; }
  bool operator==(const ShiftKind&) const = default;
};

class VarTable;
using VarTablePtr = std::shared_ptr<const VarTable>;

// Slot 0 is q, slots 1..p are parameters, slot p+1 (if present) is the shift
// variable. Tables differing only in the shift variable share a layout.
class VarTable {
 public:
  static VarTablePtr make(std::vector<std::string> params);
  static VarTablePtr make(std::vector<std::string> params, std::string shiftName, ShiftKind kind);

  std::size_t arity() const { return names_.size(); }
  std::size_t paramCount() const { return params_.size(); }
  const std::vector<std::string>& params() const { return params_; }
  const std::string& name(std::size_t slot) const { return names_.at(slot); }
  std::optional<std::size_t> indexOf(const std::string& name) const;

  bool hasShift() const { return shift_.has_value(); }
  std::size_t shiftSlot() const;
  const ShiftKind& shiftKind() const;
  const std::string& shiftName() const;

  // Base table (no shift variable) with the same parameters.
  VarTablePtr base() const;
  VarTablePtr withShift(const std::string& name, ShiftKind kind) const;

  bool operator==(const VarTable& o) const;
  bool sameBase(const VarTable& o) const { return params_ == o.params_; }

 private:
  VarTable() = default;
  std::vector<std::string> params_;
  std::vector<std::string> names_;
  std::optional<ShiftKind> shift_;
};

bool sameTable(const VarTablePtr& a, const VarTablePtr& b);
void requireSameTable(const VarTablePtr& a, const VarTablePtr& b);

}  // namespace qfb
