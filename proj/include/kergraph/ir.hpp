#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kergraph::ir {

// ---------------------------------------------------------------------------
// Errors

struct SyntaxError : std::runtime_error {
  int line, col;
  SyntaxError(const std::string& msg, int line_, int col_)
      : std::runtime_error("syntax error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownOpcode : std::runtime_error {
  explicit UnknownOpcode(const std::string& name)
      : std::runtime_error("unknown opcode: " + name) {}
};

// ---------------------------------------------------------------------------
// Opcodes and categories

enum class OpCategory { FloatingPoint, Integer, Memory, Control, Other };

enum class Opcode {
  FAdd, FMul, FDiv, FSub,          // floating point
  Add, Mul, UDiv, SDiv, Sub,       // integer
  Store, Load, Fence, GetElementPtr,  // memory
  Ret, Br, Switch, Resume,         // control
  ICmp, Phi, Mov,                  // comparisons and phi-like moves
};

inline constexpr int kOpcodeCount = 20;

OpCategory categorize(Opcode op);
// Throws UnknownOpcode for names outside the subset. Case-insensitive.
OpCategory categorize(std::string_view opcode_name);
std::optional<Opcode> opcode_from_name(std::string_view name);
std::string_view opcode_name(Opcode op);
const std::vector<Opcode>& all_opcodes();

enum class CmpPredicate { Eq, Ne, Slt, Sle, Sgt, Sge };
std::string_view predicate_name(CmpPredicate p);
std::optional<CmpPredicate> predicate_from_name(std::string_view name);

// ---------------------------------------------------------------------------
// Values

// Array extent: either a concrete element count or the name of an integer
// function parameter.
struct Extent {
  long long value = 0;
  std::string symbol;  // non-empty means symbolic

  bool concrete() const { return symbol.empty(); }
  static Extent of(long long v) { return {v, {}}; }
  static Extent sym(std::string s) { return {0, std::move(s)}; }
  bool operator==(const Extent&) const = default;
};

// Affine form over virtual registers: sum of coeff * reg plus a constant.
// Kept canonical: no zero coefficients, one term per register, terms in
// first-appearance order.
struct AffineExpr {
  std::vector<std::pair<std::string, long long>> terms;
  long long constant = 0;

  void add_term(const std::string& reg, long long coeff);
  bool is_constant() const { return terms.empty(); }
  AffineExpr shifted(const std::string& reg, long long delta) const;  // reg := reg + delta
  std::string str() const;
  bool operator==(const AffineExpr&) const = default;
};

struct AddressExpr {
  std::string base;                    // array symbol
  std::vector<AffineExpr> subscripts;  // one per dimension
  std::vector<Extent> dim_sizes;       // declared extents, same arity

  bool operator==(const AddressExpr&) const = default;
};

struct RegRef {
  std::string name;  // without the leading '%'
  bool operator==(const RegRef&) const = default;
};

using Operand = std::variant<RegRef, long long, double, AddressExpr>;

inline Operand reg(std::string name) { return RegRef{std::move(name)}; }
inline Operand imm_int(long long v) { return v; }
inline Operand imm_float(double v) { return v; }

// ---------------------------------------------------------------------------
// Instructions, blocks, functions

struct Instruction {
  Opcode op;
  std::optional<std::string> result;    // destination register
  std::vector<Operand> operands;        // value operands
  std::vector<std::string> targets;     // Br/Switch successors; Phi incoming blocks
  std::optional<CmpPredicate> pred;     // ICmp only
  std::optional<int> elem_size;         // Load/Store/GetElementPtr byte width

  bool operator==(const Instruction&) const = default;
};

struct Param {
  std::string name;
  std::vector<Extent> dims;  // empty means scalar

  bool is_array() const { return !dims.empty(); }
  bool operator==(const Param&) const = default;
};

struct BasicBlock {
  std::string id;
  std::vector<Instruction> instructions;

  const Instruction& terminator() const { return instructions.back(); }
  bool operator==(const BasicBlock&) const = default;
};

struct FunctionIR {
  std::string name;
  std::vector<Param> params;
  std::vector<BasicBlock> blocks;

  const std::string& entry() const { return blocks.front().id; }
  const BasicBlock* find_block(std::string_view id) const;
  const Param* find_param(std::string_view name) const;
  int block_index(std::string_view id) const;  // -1 if absent

  bool operator==(const FunctionIR&) const = default;
};

// Successor labels of a terminator, in declaration order (may repeat).
std::vector<std::string> successor_labels(const Instruction& term);

// ---------------------------------------------------------------------------
// Operations

// Parses one function from the textual IR subset. Throws SyntaxError or
// SemanticError.
FunctionIR parse_ir(std::string_view text);

// Canonical printer; parse_ir(serialize_ir(f)) is structurally equal to f.
std::string serialize_ir(const FunctionIR& f);

// Full semantic validation (also run by parse_ir). Throws SemanticError.
void validate(const FunctionIR& f);

}  // namespace kergraph::ir
