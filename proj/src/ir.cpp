#include "kergraph/ir.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace kergraph::ir {

namespace {

struct OpInfo {
  Opcode op;
  std::string_view name;
  OpCategory cat;
};

constexpr std::array<OpInfo, kOpcodeCount> kOps{{
    {Opcode::FAdd, "FAdd", OpCategory::FloatingPoint},
    {Opcode::FMul, "FMul", OpCategory::FloatingPoint},
    {Opcode::FDiv, "FDiv", OpCategory::FloatingPoint},
    {Opcode::FSub, "FSub", OpCategory::FloatingPoint},
    {Opcode::Add, "Add", OpCategory::Integer},
    {Opcode::Mul, "Mul", OpCategory::Integer},
    {Opcode::UDiv, "UDiv", OpCategory::Integer},
    {Opcode::SDiv, "SDiv", OpCategory::Integer},
    {Opcode::Sub, "Sub", OpCategory::Integer},
    {Opcode::Store, "Store", OpCategory::Memory},
    {Opcode::Load, "Load", OpCategory::Memory},
    {Opcode::Fence, "Fence", OpCategory::Memory},
    {Opcode::GetElementPtr, "GetElementPtr", OpCategory::Memory},
    {Opcode::Ret, "Ret", OpCategory::Control},
    {Opcode::Br, "Br", OpCategory::Control},
    {Opcode::Switch, "Switch", OpCategory::Control},
    {Opcode::Resume, "Resume", OpCategory::Control},
    {Opcode::ICmp, "ICmp", OpCategory::Other},
    {Opcode::Phi, "Phi", OpCategory::Other},
    {Opcode::Mov, "Mov", OpCategory::Other},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

OpCategory categorize(Opcode op) { return kOps[static_cast<size_t>(op)].cat; }

OpCategory categorize(std::string_view opcode_name) {
  auto op = opcode_from_name(opcode_name);
  if (!op) throw UnknownOpcode(std::string(opcode_name));
  return categorize(*op);
}

std::optional<Opcode> opcode_from_name(std::string_view name) {
  static const std::map<std::string, Opcode> by_name = [] {
    std::map<std::string, Opcode> m;
    for (const auto& info : kOps) m[lower(info.name)] = info.op;
    return m;
  }();
  auto it = by_name.find(lower(name));
  if (it == by_name.end()) return std::nullopt;
  return it->second;
}

std::string_view opcode_name(Opcode op) {
  return kOps[static_cast<size_t>(op)].name;
}

const std::vector<Opcode>& all_opcodes() {
  static const std::vector<Opcode> v = [] {
    std::vector<Opcode> out;
    for (const auto& info : kOps) out.push_back(info.op);
    return out;
  }();
  return v;
}

std::string_view predicate_name(CmpPredicate p) {
  switch (p) {
    case CmpPredicate::Eq: return "eq";
    case CmpPredicate::Ne: return "ne";
    case CmpPredicate::Slt: return "slt";
    case CmpPredicate::Sle: return "sle";
    case CmpPredicate::Sgt: return "sgt";
    case CmpPredicate::Sge: return "sge";
  }
  return "?";
}

std::optional<CmpPredicate> predicate_from_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "eq") return CmpPredicate::Eq;
  if (n == "ne") return CmpPredicate::Ne;
  if (n == "slt") return CmpPredicate::Slt;
  if (n == "sle") return CmpPredicate::Sle;
  if (n == "sgt") return CmpPredicate::Sgt;
  if (n == "sge") return CmpPredicate::Sge;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// AffineExpr

void AffineExpr::add_term(const std::string& reg, long long coeff) {
  if (coeff == 0) return;
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (it->first == reg) {
      it->second += coeff;
      if (it->second == 0) terms.erase(it);
      return;
    }
  }
  terms.emplace_back(reg, coeff);
}

AffineExpr AffineExpr::shifted(const std::string& reg, long long delta) const {
  AffineExpr out = *this;
  for (const auto& [r, c] : terms) {
    if (r == reg) out.constant += c * delta;
  }
  return out;
}

std::string AffineExpr::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, c] : terms) {
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const long long a = c < 0 ? -c : c;
    if (a != 1) os << a << "*";
    os << "%" << r;
    first = false;
  }
  if (constant != 0 || first) {
    if (first) {
      os << constant;
    } else {
      os << (constant < 0 ? " - " : " + ") << (constant < 0 ? -constant : constant);
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// FunctionIR helpers

const BasicBlock* FunctionIR::find_block(std::string_view id) const {
  for (const auto& b : blocks)
    if (b.id == id) return &b;
  return nullptr;
}

const Param* FunctionIR::find_param(std::string_view pname) const {
  for (const auto& p : params)
    if (p.name == pname) return &p;
  return nullptr;
}

int FunctionIR::block_index(std::string_view id) const {
  for (size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> successor_labels(const Instruction& term) {
  switch (term.op) {
    case Opcode::Br:
    case Opcode::Switch:
      return term.targets;
    default:
      return {};
  }
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool produces_value(Opcode op) {
  switch (op) {
    case Opcode::FAdd: case Opcode::FMul: case Opcode::FDiv: case Opcode::FSub:
    case Opcode::Add: case Opcode::Mul: case Opcode::UDiv: case Opcode::SDiv:
    case Opcode::Sub:
    case Opcode::Load: case Opcode::GetElementPtr:
    case Opcode::ICmp: case Opcode::Phi: case Opcode::Mov:
      return true;
    default:
      return false;
  }
}

const AddressExpr* addr_of(const Operand& o) {
  return std::get_if<AddressExpr>(&o);
}

void check_address(const FunctionIR& f, const AddressExpr& a) {
  const Param* p = f.find_param(a.base);
  if (!p || !p->is_array())
    throw SemanticError("address base '" + a.base + "' is not a declared array");
  if (a.subscripts.size() != a.dim_sizes.size())
    throw SemanticError("address on '" + a.base + "': subscript/extent arity mismatch");
  if (a.dim_sizes != p->dims)
    throw SemanticError("address on '" + a.base + "': extents differ from declaration");
  for (const auto& d : a.dim_sizes) {
    if (d.concrete() && d.value <= 0)
      throw SemanticError("array '" + a.base + "' has non-positive extent");
    if (!d.concrete()) {
      const Param* s = f.find_param(d.symbol);
      if (!s || s->is_array())
        throw SemanticError("extent symbol '" + d.symbol + "' is not a scalar parameter");
    }
  }
}

}  // namespace

void validate(const FunctionIR& f) {
  if (f.blocks.empty()) throw SemanticError("function has no blocks");

  std::set<std::string> block_ids;
  for (const auto& b : f.blocks) {
    if (!block_ids.insert(b.id).second)
      throw SemanticError("duplicate block id '" + b.id + "'");
  }

  // Definition set: scalar params plus every instruction result.
  std::set<std::string> defs;
  std::set<std::string> array_names;
  for (const auto& p : f.params) {
    if (p.is_array()) {
      if (!array_names.insert(p.name).second)
        throw SemanticError("duplicate parameter '" + p.name + "'");
    } else if (!defs.insert(p.name).second) {
      throw SemanticError("duplicate parameter '" + p.name + "'");
    }
    for (const auto& d : p.dims) {
      if (d.concrete() && d.value <= 0)
        throw SemanticError("array '" + p.name + "' has non-positive extent");
    }
  }
  for (const auto& b : f.blocks) {
    for (const auto& ins : b.instructions) {
      if (ins.result) {
        if (array_names.count(*ins.result))
          throw SemanticError("register '%" + *ins.result + "' shadows an array");
        if (!defs.insert(*ins.result).second)
          throw SemanticError("register '%" + *ins.result + "' assigned twice");
      }
    }
  }

  auto check_reg_use = [&](const std::string& r) {
    if (!defs.count(r))
      throw SemanticError("use of undefined register '%" + r + "'");
  };
  auto check_operand = [&](const Operand& o) {
    if (const auto* rr = std::get_if<RegRef>(&o)) {
      check_reg_use(rr->name);
    } else if (const auto* a = addr_of(o)) {
      check_address(f, *a);
      for (const auto& sub : a->subscripts)
        for (const auto& [r, c] : sub.terms) {
          (void)c;
          check_reg_use(r);
        }
    }
  };

  for (const auto& b : f.blocks) {
    if (b.instructions.empty())
      throw SemanticError("block '" + b.id + "' is empty (missing terminator)");
    bool past_phis = false;
    for (size_t i = 0; i < b.instructions.size(); ++i) {
      const Instruction& ins = b.instructions[i];
      const bool last = i + 1 == b.instructions.size();
      const OpCategory cat = categorize(ins.op);

      if (cat == OpCategory::Control && !last)
        throw SemanticError("control instruction before terminator in '" + b.id + "'");
      if (last && cat != OpCategory::Control)
        throw SemanticError("block '" + b.id + "' does not end with a terminator");

      if (ins.op == Opcode::Phi) {
        if (past_phis)
          throw SemanticError("phi after non-phi instruction in '" + b.id + "'");
      } else {
        past_phis = true;
      }

      if (produces_value(ins.op) && !ins.result)
        throw SemanticError(std::string(opcode_name(ins.op)) + " requires a result register");
      if (!produces_value(ins.op) && ins.result)
        throw SemanticError(std::string(opcode_name(ins.op)) + " cannot produce a result");

      for (const auto& o : ins.operands) check_operand(o);

      switch (ins.op) {
        case Opcode::Load:
          if (ins.operands.size() != 1 || !addr_of(ins.operands[0]))
            throw SemanticError("Load takes exactly one address operand");
          if (!ins.elem_size || *ins.elem_size <= 0)
            throw SemanticError("Load requires a positive element size");
          break;
        case Opcode::Store:
          if (ins.operands.size() != 2 || addr_of(ins.operands[0]) ||
              !addr_of(ins.operands[1]))
            throw SemanticError("Store takes a value and an address operand");
          if (!ins.elem_size || *ins.elem_size <= 0)
            throw SemanticError("Store requires a positive element size");
          break;
        case Opcode::GetElementPtr:
          if (ins.operands.size() != 1 || !addr_of(ins.operands[0]))
            throw SemanticError("GetElementPtr takes exactly one address operand");
          break;
        case Opcode::Br:
          if (ins.targets.size() == 1) {
            if (!ins.operands.empty())
              throw SemanticError("unconditional Br takes no operands");
          } else if (ins.targets.size() == 2) {
            if (ins.operands.size() != 1)
              throw SemanticError("conditional Br takes one condition operand");
          } else {
            throw SemanticError("Br takes one or two targets");
          }
          break;
        case Opcode::Switch:
          if (ins.operands.size() != 1 || ins.targets.empty())
            throw SemanticError("Switch takes a selector and at least one target");
          break;
        case Opcode::Ret:
        case Opcode::Resume:
        case Opcode::Fence:
          if (!ins.operands.empty() || !ins.targets.empty())
            throw SemanticError(std::string(opcode_name(ins.op)) + " takes no operands");
          break;
        case Opcode::Phi:
          if (ins.operands.empty() || ins.operands.size() != ins.targets.size())
            throw SemanticError("Phi needs matching incoming values and blocks");
          break;
        case Opcode::ICmp:
          if (ins.operands.size() != 2 || !ins.pred)
            throw SemanticError("ICmp takes a predicate and two operands");
          break;
        case Opcode::Mov:
          if (ins.operands.size() != 1)
            throw SemanticError("Mov takes one operand");
          break;
        default:
          if (ins.operands.size() != 2)
            throw SemanticError(std::string(opcode_name(ins.op)) + " takes two operands");
          break;
      }

      // Address operands are only legal on memory instructions.
      if (ins.op != Opcode::Load && ins.op != Opcode::Store &&
          ins.op != Opcode::GetElementPtr) {
        for (const auto& o : ins.operands)
          if (addr_of(o))
            throw SemanticError(std::string(opcode_name(ins.op)) +
                                " cannot take an address operand");
      }

      // Branch and phi targets must name existing blocks.
      for (const auto& t : ins.targets)
        if (!block_ids.count(t))
          throw SemanticError("branch to undefined block '" + t + "'");
    }
  }
}

}  // namespace kergraph::ir
