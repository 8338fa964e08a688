#include <cctype>
#include <string>
#include <vector>

#include "kergraph/ir.hpp"

namespace kergraph::ir {

namespace {

enum class Tok { Ident, Int, Float, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long ival = 0;
  double fval = 0.0;
  char punct = 0;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    cur_ = Token{};
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_' || src_[pos_] == '.'))
        bump();
      cur_.kind = Tok::Ident;
      cur_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      bool is_float = false;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      if (pos_ < src_.size() && src_[pos_] == '.') {
        is_float = true;
        bump();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        is_float = true;
        bump();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) bump();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      }
      const std::string text(src_.substr(start, pos_ - start));
      cur_.text = text;
      if (is_float) {
        cur_.kind = Tok::Float;
        cur_.fval = std::stod(text);
      } else {
        cur_.kind = Tok::Int;
        cur_.ival = std::stoll(text);
      }
      return;
    }
    cur_.kind = Tok::Punct;
    cur_.punct = c;
    bump();
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        bump();
      if (pos_ < src_.size() && (src_[pos_] == ';' || src_[pos_] == '#')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
        continue;
      }
      break;
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  FunctionIR parse() {
    expect_keyword("fn");
    FunctionIR f;
    f.name = expect_ident("function name");
    if (at_punct('(')) parse_params(f);
    expect_punct('{');
    while (!at_punct('}')) {
      f.blocks.push_back(parse_block(f));
    }
    expect_punct('}');
    if (lex_.peek().kind != Tok::End) fail("trailing input after function body");
    if (f.blocks.empty()) fail("function has no blocks");
    validate(f);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = lex_.peek();
    throw SyntaxError(msg, t.line, t.col);
  }

  bool at_punct(char c) const {
    return lex_.peek().kind == Tok::Punct && lex_.peek().punct == c;
  }

  bool accept_punct(char c) {
    if (!at_punct(c)) return false;
    lex_.take();
    return true;
  }

  void expect_punct(char c) {
    if (!accept_punct(c)) fail(std::string("expected '") + c + "'");
  }

  std::string expect_ident(const char* what) {
    if (lex_.peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return lex_.take().text;
  }

  void expect_keyword(const char* kw) {
    if (lex_.peek().kind != Tok::Ident || lex_.peek().text != kw)
      fail(std::string("expected '") + kw + "'");
    lex_.take();
  }

  long long expect_int(const char* what) {
    if (lex_.peek().kind != Tok::Int) fail(std::string("expected ") + what);
    return lex_.take().ival;
  }

  void parse_params(FunctionIR& f) {
    expect_punct('(');
    if (accept_punct(')')) return;
    do {
      Param p;
      p.name = expect_ident("parameter name");
      while (accept_punct('[')) {
        if (lex_.peek().kind == Tok::Int) {
          p.dims.push_back(Extent::of(lex_.take().ival));
        } else {
          p.dims.push_back(Extent::sym(expect_ident("array extent")));
        }
        expect_punct(']');
      }
      f.params.push_back(std::move(p));
    } while (accept_punct(','));
    expect_punct(')');
  }

  BasicBlock parse_block(const FunctionIR& f) {
    BasicBlock b;
    b.id = expect_ident("block label");
    expect_punct(':');
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::Punct && t.punct == '}') break;
      if (t.kind == Tok::Punct && t.punct == '%') {
        b.instructions.push_back(parse_instruction(f));
        continue;
      }
      if (t.kind == Tok::Ident) {
        // A label followed by ':' starts the next block.
        Lexer save = lex_;
        lex_.take();
        const bool is_label = at_punct(':');
        lex_ = save;
        if (is_label) break;
        b.instructions.push_back(parse_instruction(f));
        continue;
      }
      fail("expected instruction, block label, or '}'");
    }
    return b;
  }

  Instruction parse_instruction(const FunctionIR& f) {
    Instruction ins;
    if (accept_punct('%')) {
      ins.result = expect_ident("register name");
      expect_punct('=');
    }
    const Token opTok = lex_.peek();
    const std::string opname = expect_ident("opcode");
    auto op = opcode_from_name(opname);
    if (!op) throw SyntaxError("unknown opcode '" + opname + "'", opTok.line, opTok.col);
    ins.op = *op;

    switch (ins.op) {
      case Opcode::Ret:
      case Opcode::Resume:
      case Opcode::Fence:
        break;
      case Opcode::Br: {
        if (at_punct('%')) {
          ins.operands.push_back(parse_value());
          expect_punct(',');
          ins.targets.push_back(expect_ident("branch target"));
          expect_punct(',');
          ins.targets.push_back(expect_ident("branch target"));
        } else {
          ins.targets.push_back(expect_ident("branch target"));
        }
        break;
      }
      case Opcode::Switch: {
        ins.operands.push_back(parse_value());
        expect_punct(',');
        ins.targets.push_back(expect_ident("switch target"));
        while (accept_punct(',')) ins.targets.push_back(expect_ident("switch target"));
        break;
      }
      case Opcode::Phi: {
        do {
          expect_punct('[');
          ins.targets.push_back(expect_ident("incoming block"));
          expect_punct(',');
          ins.operands.push_back(parse_value());
          expect_punct(']');
        } while (accept_punct(','));
        break;
      }
      case Opcode::ICmp: {
        const Token pt = lex_.peek();
        auto pred = predicate_from_name(expect_ident("comparison predicate"));
        if (!pred) throw SyntaxError("unknown predicate", pt.line, pt.col);
        ins.pred = *pred;
        ins.operands.push_back(parse_value());
        expect_punct(',');
        ins.operands.push_back(parse_value());
        break;
      }
      case Opcode::Load:
      case Opcode::GetElementPtr: {
        int elem = 0;
        ins.operands.push_back(parse_address(f, elem));
        ins.elem_size = elem;
        break;
      }
      case Opcode::Store: {
        ins.operands.push_back(parse_value());
        expect_punct(',');
        int elem = 0;
        ins.operands.push_back(parse_address(f, elem));
        ins.elem_size = elem;
        break;
      }
      case Opcode::Mov: {
        ins.operands.push_back(parse_value());
        break;
      }
      default: {  // two-operand arithmetic
        ins.operands.push_back(parse_value());
        expect_punct(',');
        ins.operands.push_back(parse_value());
        break;
      }
    }
    return ins;
  }

  Operand parse_value() {
    if (accept_punct('%')) return RegRef{expect_ident("register name")};
    bool neg = accept_punct('-');
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) {
      long long v = lex_.take().ival;
      return neg ? -v : v;
    }
    if (t.kind == Tok::Float) {
      double v = lex_.take().fval;
      return neg ? -v : v;
    }
    fail("expected register or constant");
  }

  Operand parse_address(const FunctionIR& f, int& elem_size) {
    expect_keyword("gep");
    AddressExpr a;
    a.base = expect_ident("array name");
    while (accept_punct('[')) {
      a.subscripts.push_back(parse_affine());
      expect_punct(']');
    }
    expect_punct(':');
    elem_size = static_cast<int>(expect_int("element size"));
    // Extents come from the declaration; the semantic pass re-checks arity.
    if (const Param* p = f.find_param(a.base); p && p->is_array()) {
      a.dim_sizes = p->dims;
    } else {
      throw SemanticError("address base '" + a.base + "' is not a declared array");
    }
    return a;
  }

  // affine := ['-'] term (('+'|'-') term)*
  // term   := int ['*' '%' reg] | '%' reg
  AffineExpr parse_affine() {
    AffineExpr e;
    bool neg = accept_punct('-');
    parse_affine_term(e, neg);
    for (;;) {
      if (accept_punct('+')) {
        parse_affine_term(e, false);
      } else if (accept_punct('-')) {
        parse_affine_term(e, true);
      } else {
        break;
      }
    }
    return e;
  }

  void parse_affine_term(AffineExpr& e, bool neg) {
    if (accept_punct('%')) {
      e.add_term(expect_ident("register name"), neg ? -1 : 1);
      return;
    }
    long long c = expect_int("subscript constant");
    if (neg) c = -c;
    if (accept_punct('*')) {
      expect_punct('%');
      e.add_term(expect_ident("register name"), c);
    } else {
      e.constant += c;
    }
  }

  Lexer lex_;
};

}  // namespace

FunctionIR parse_ir(std::string_view text) { return Parser(text).parse(); }

}  // namespace kergraph::ir
