#include <sstream>

#include "kergraph/ir.hpp"

namespace kergraph::ir {

namespace {

void print_float(std::ostream& os, double v) {
  // Shortest representation that round-trips, always with a float marker.
  for (int prec = 1; prec <= 17; ++prec) {
    std::ostringstream t;
    t.precision(prec);
    t << v;
    if (std::stod(t.str()) == v) {
      std::string s = t.str();
      if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
          s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
      os << s;
      return;
    }
  }
  os << v;
}

void print_operand(std::ostream& os, const Operand& o, std::optional<int> elem) {
  if (const auto* r = std::get_if<RegRef>(&o)) {
    os << "%" << r->name;
  } else if (const auto* i = std::get_if<long long>(&o)) {
    os << *i;
  } else if (const auto* d = std::get_if<double>(&o)) {
    print_float(os, *d);
  } else {
    const auto& a = std::get<AddressExpr>(o);
    os << "gep " << a.base;
    for (const auto& s : a.subscripts) os << "[" << s.str() << "]";
    os << " : " << (elem ? *elem : 0);
  }
}

void print_instruction(std::ostream& os, const Instruction& ins) {
  os << "  ";
  if (ins.result) os << "%" << *ins.result << " = ";
  os << opcode_name(ins.op);
  switch (ins.op) {
    case Opcode::Br:
      if (ins.targets.size() == 1) {
        os << " " << ins.targets[0];
      } else {
        os << " ";
        print_operand(os, ins.operands[0], {});
        os << ", " << ins.targets[0] << ", " << ins.targets[1];
      }
      break;
    case Opcode::Switch:
      os << " ";
      print_operand(os, ins.operands[0], {});
      for (const auto& t : ins.targets) os << ", " << t;
      break;
    case Opcode::Phi:
      for (size_t i = 0; i < ins.operands.size(); ++i) {
        os << (i ? ", [" : " [") << ins.targets[i] << ", ";
        print_operand(os, ins.operands[i], {});
        os << "]";
      }
      break;
    case Opcode::ICmp:
      os << " " << predicate_name(*ins.pred) << " ";
      print_operand(os, ins.operands[0], {});
      os << ", ";
      print_operand(os, ins.operands[1], {});
      break;
    default:
      for (size_t i = 0; i < ins.operands.size(); ++i) {
        os << (i ? ", " : " ");
        print_operand(os, ins.operands[i], ins.elem_size);
      }
      break;
  }
  os << "\n";
}

}  // namespace

std::string serialize_ir(const FunctionIR& f) {
  std::ostringstream os;
  os << "fn " << f.name;
  if (!f.params.empty()) {
    os << "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) os << ", ";
      os << f.params[i].name;
      for (const auto& d : f.params[i].dims) {
        os << "[";
        if (d.concrete())
          os << d.value;
        else
          os << d.symbol;
        os << "]";
      }
    }
    os << ")";
  }
  os << " {\n";
  for (const auto& b : f.blocks) {
    os << b.id << ":\n";
    for (const auto& ins : b.instructions) print_instruction(os, ins);
  }
  os << "}\n";
  return os.str();
}

}  // namespace kergraph::ir
