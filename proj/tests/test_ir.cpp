#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "kergraph/ir.hpp"

using namespace kergraph::ir;

TEST_CASE("categorize follows the four attribute groups") {
  CHECK(categorize("FAdd") == OpCategory::FloatingPoint);
  CHECK(categorize("FMul") == OpCategory::FloatingPoint);
  CHECK(categorize("FDiv") == OpCategory::FloatingPoint);
  CHECK(categorize("FSub") == OpCategory::FloatingPoint);
  CHECK(categorize("Add") == OpCategory::Integer);
  CHECK(categorize("Mul") == OpCategory::Integer);
  CHECK(categorize("UDiv") == OpCategory::Integer);
  CHECK(categorize("SDiv") == OpCategory::Integer);
  CHECK(categorize("Sub") == OpCategory::Integer);
  CHECK(categorize("Store") == OpCategory::Memory);
  CHECK(categorize("Load") == OpCategory::Memory);
  CHECK(categorize("Fence") == OpCategory::Memory);
  CHECK(categorize("GetElementPtr") == OpCategory::Memory);
  CHECK(categorize("Ret") == OpCategory::Control);
  CHECK(categorize("Br") == OpCategory::Control);
  CHECK(categorize("Switch") == OpCategory::Control);
  CHECK(categorize("Resume") == OpCategory::Control);
  CHECK(categorize("ICmp") == OpCategory::Other);
  CHECK(categorize("Phi") == OpCategory::Other);
  CHECK(categorize("Mov") == OpCategory::Other);
  CHECK_THROWS_AS(categorize("Call"), UnknownOpcode);
  CHECK_THROWS_AS(categorize(""), UnknownOpcode);
}

TEST_CASE("categorize is total over the opcode list and categories partition it") {
  std::set<OpCategory> seen;
  int counts[5] = {0, 0, 0, 0, 0};
  for (Opcode op : all_opcodes()) {
    OpCategory c = categorize(op);               // must not throw
    CHECK(categorize(opcode_name(op)) == c);     // name round trip
    seen.insert(c);
    counts[static_cast<int>(c)]++;
  }
  CHECK(seen.size() == 5);
  CHECK(counts[static_cast<int>(OpCategory::FloatingPoint)] == 4);
  CHECK(counts[static_cast<int>(OpCategory::Integer)] == 5);
  CHECK(counts[static_cast<int>(OpCategory::Memory)] == 4);
  CHECK(counts[static_cast<int>(OpCategory::Control)] == 4);
}

TEST_CASE("minimal function parses") {
  FunctionIR f = parse_ir("fn f { bb0: ret }");
  CHECK(f.name == "f");
  REQUIRE(f.blocks.size() == 1);
  CHECK(f.blocks[0].id == "bb0");
  REQUIRE(f.blocks[0].instructions.size() == 1);
  CHECK(f.blocks[0].instructions[0].op == Opcode::Ret);
  CHECK(f.entry() == "bb0");
}

TEST_CASE("small loop function parses with full structure") {
  const char* src = R"(
fn axpy(y[N], x[N], a, N) {
bb0:
  %g = ICmp slt 0, %N
  br %g, bb1, bb2
bb1:
  %i = Phi [bb0, 0], [bb1, %i.next]
  %t0 = Load gep x[%i] : 8
  %t1 = FMul %a, %t0
  %t2 = Load gep y[%i] : 8
  %t3 = FAdd %t2, %t1
  Store %t3, gep y[%i] : 8
  %i.next = Add %i, 1
  %c = ICmp slt %i.next, %N
  br %c, bb1, bb2
bb2:
  ret
}
)";
  FunctionIR f = parse_ir(src);
  REQUIRE(f.blocks.size() == 3);
  CHECK(f.params.size() == 4);
  CHECK(f.params[0].is_array());
  CHECK(f.params[0].dims[0] == Extent::sym("N"));
  CHECK_FALSE(f.params[2].is_array());

  const BasicBlock& body = f.blocks[1];
  CHECK(body.instructions.size() == 9);
  CHECK(body.instructions[0].op == Opcode::Phi);
  const Instruction& load = body.instructions[1];
  CHECK(load.op == Opcode::Load);
  CHECK(load.elem_size == 8);
  const auto& addr = std::get<AddressExpr>(load.operands[0]);
  CHECK(addr.base == "x");
  REQUIRE(addr.subscripts.size() == 1);
  CHECK(addr.subscripts[0].terms.size() == 1);
  CHECK(addr.subscripts[0].terms[0] == std::pair<std::string, long long>{"i", 1});
}

TEST_CASE("affine subscripts canonicalize") {
  FunctionIR f = parse_ir(
      "fn f(A[N][N], N) { bb0: %i = Mov 0\n"
      "%t = Load gep A[2*%i + 3 - %i][%i - %i + 1] : 8\n ret }");
  const auto& a = std::get<AddressExpr>(f.blocks[0].instructions[1].operands[0]);
  CHECK(a.subscripts[0].terms == decltype(a.subscripts[0].terms){{"i", 1}});
  CHECK(a.subscripts[0].constant == 3);
  CHECK(a.subscripts[1].terms.empty());
  CHECK(a.subscripts[1].constant == 1);
}

TEST_CASE("branch to undefined label is a semantic error") {
  CHECK_THROWS_AS(parse_ir("fn f { bb0: br bb9 }"), SemanticError);
}

TEST_CASE("double assignment is rejected") {
  CHECK_THROWS_AS(parse_ir("fn f { bb0: %x = Add 1, 2\n %x = Add 1, 2\n ret }"),
                  SemanticError);
}

TEST_CASE("malformed inputs raise syntax errors with position") {
  try {
    parse_ir("fn f { bb0: %x = }");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 1);
    CHECK(e.col > 1);
  }
  CHECK_THROWS_AS(parse_ir("fn f { bb0: Frob 1, 2\n ret }"), SyntaxError);
  CHECK_THROWS_AS(parse_ir(""), SyntaxError);
}

TEST_CASE("semantic violations are rejected") {
  // Missing terminator.
  CHECK_THROWS_AS(parse_ir("fn f { bb0: %x = Add 1, 2 }"), SemanticError);
  // Control before end of block.
  CHECK_THROWS_AS(parse_ir("fn f { bb0: ret\n %x = Add 1, 2\n ret }"), SemanticError);
  // Store to undeclared array.
  CHECK_THROWS_AS(parse_ir("fn f { bb0: Store 1.0, gep A[0] : 8\n ret }"),
                  SemanticError);
  // Use of undefined register.
  CHECK_THROWS_AS(parse_ir("fn f { bb0: %x = Add %q, 1\n ret }"), SemanticError);
  // Phi after non-phi.
  CHECK_THROWS_AS(
      parse_ir("fn f { bb0: %a = Add 1, 2\n %p = Phi [bb0, 1]\n ret }"),
      SemanticError);
}

TEST_CASE("round trip on the minimal function") {
  FunctionIR f = parse_ir("fn f { bb0: ret }");
  FunctionIR g = parse_ir(serialize_ir(f));
  CHECK(f == g);
}

TEST_CASE("serialization is byte-deterministic") {
  const char* src =
      "fn f(A[4][N], b, N) { bb0: %v = Load gep A[%b - 2*%b][3] : 8\n"
      "Store -1.5, gep A[0][%b] : 8\n Fence\n switch %b, bb0, bb1\n bb1: resume }";
  FunctionIR f = parse_ir(src);
  std::string s1 = serialize_ir(f);
  std::string s2 = serialize_ir(parse_ir(s1));
  CHECK(s1 == s2);
  CHECK(parse_ir(s1) == f);
}

TEST_CASE("opcode names are case-insensitive on input") {
  FunctionIR f = parse_ir("fn f { bb0: %x = add 1, 2\n RET }");
  CHECK(f.blocks[0].instructions[0].op == Opcode::Add);
  CHECK(f.blocks[0].instructions[1].op == Opcode::Ret);
}
