#include "kergraph/interp.hpp"

#include <stdexcept>

#include "kergraph/rng.hpp"

namespace kergraph::interp {

using namespace kergraph::ir;

long long Value::as_int() const {
  if (is_float) throw std::runtime_error("expected integer value, got float");
  return i;
}

std::vector<long long> resolve_dims(const Param& p,
                                    const std::map<std::string, long long>& int_params) {
  std::vector<long long> dims;
  for (const auto& d : p.dims) {
    if (d.concrete()) {
      dims.push_back(d.value);
    } else {
      auto it = int_params.find(d.symbol);
      if (it == int_params.end())
        throw std::runtime_error("no value for extent symbol '" + d.symbol + "'");
      dims.push_back(it->second);
    }
  }
  return dims;
}

std::map<std::string, std::vector<double>> alloc_arrays(
    const FunctionIR& f, const std::map<std::string, long long>& int_params,
    uint64_t fill_seed) {
  std::map<std::string, std::vector<double>> arrays;
  for (const auto& p : f.params) {
    if (!p.is_array()) continue;
    long long n = 1;
    for (long long d : resolve_dims(p, int_params)) n *= d;
    Rng rng(mix_seed(fill_seed, p.name));
    std::vector<double> buf(static_cast<size_t>(n));
    for (auto& x : buf) x = rng.unit() * 2.0 - 1.0;
    arrays[p.name] = std::move(buf);
  }
  return arrays;
}

namespace {

struct Machine {
  const FunctionIR& f;
  const InterpOptions& opts;
  std::map<std::string, Value> regs;
  std::map<std::string, std::vector<double>> arrays;
  std::map<std::string, std::vector<long long>> dims;
  InterpResult result;

  Machine(const FunctionIR& fn, const std::map<std::string, long long>& ip,
          const std::map<std::string, double>& fp,
          std::map<std::string, std::vector<double>> arr, const InterpOptions& o)
      : f(fn), opts(o), arrays(std::move(arr)) {
    for (const auto& p : f.params) {
      if (p.is_array()) {
        dims[p.name] = resolve_dims(p, ip);
        auto it = arrays.find(p.name);
        if (it == arrays.end())
          throw std::runtime_error("missing buffer for array '" + p.name + "'");
        long long n = 1;
        for (long long d : dims[p.name]) n *= d;
        if (static_cast<long long>(it->second.size()) != n)
          throw std::runtime_error("buffer size mismatch for array '" + p.name + "'");
      } else if (auto it = ip.find(p.name); it != ip.end()) {
        regs[p.name] = Value::of_int(it->second);
      } else if (auto jt = fp.find(p.name); jt != fp.end()) {
        regs[p.name] = Value::of_float(jt->second);
      } else {
        throw std::runtime_error("no value for parameter '" + p.name + "'");
      }
    }
  }

  Value eval(const Operand& o) const {
    if (const auto* r = std::get_if<RegRef>(&o)) {
      auto it = regs.find(r->name);
      if (it == regs.end())
        throw std::runtime_error("read of unset register '%" + r->name + "'");
      return it->second;
    }
    if (const auto* i = std::get_if<long long>(&o)) return Value::of_int(*i);
    if (const auto* d = std::get_if<double>(&o)) return Value::of_float(*d);
    throw std::runtime_error("address operand in value position");
  }

  long long linear_index(const AddressExpr& a) const {
    const auto& dd = dims.at(a.base);
    long long idx = 0;
    for (size_t k = 0; k < a.subscripts.size(); ++k) {
      long long sub = a.subscripts[k].constant;
      for (const auto& [rname, coeff] : a.subscripts[k].terms) {
        auto it = regs.find(rname);
        if (it == regs.end())
          throw std::runtime_error("read of unset register '%" + rname + "'");
        sub += coeff * it->second.as_int();
      }
      if (sub < 0 || sub >= dd[k])
        throw std::runtime_error("subscript out of bounds on '" + a.base + "'");
      idx = idx * dd[k] + sub;
    }
    return idx;
  }

  void run() {
    int cur = 0;
    int prev = -1;
    for (;;) {
      const BasicBlock& b = f.blocks[cur];
      // Phi moves are evaluated atomically on block entry.
      std::vector<std::pair<std::string, Value>> phi_writes;
      size_t pc = 0;
      while (pc < b.instructions.size() && b.instructions[pc].op == Opcode::Phi) {
        const Instruction& ins = b.instructions[pc];
        bool matched = false;
        for (size_t k = 0; k < ins.targets.size(); ++k) {
          if (prev >= 0 && ins.targets[k] == f.blocks[prev].id) {
            phi_writes.emplace_back(*ins.result, eval(ins.operands[k]));
            matched = true;
            break;
          }
        }
        if (!matched)
          throw std::runtime_error("phi in '" + b.id + "' has no incoming for predecessor");
        ++pc;
      }
      for (auto& [name, v] : phi_writes) regs[name] = v;
      result.steps += static_cast<long long>(pc);

      for (; pc < b.instructions.size(); ++pc) {
        if (++result.steps > opts.max_steps)
          throw std::runtime_error("step limit exceeded");
        const Instruction& ins = b.instructions[pc];
        switch (ins.op) {
          case Opcode::FAdd: case Opcode::FMul: case Opcode::FDiv: case Opcode::FSub: {
            const double a = eval(ins.operands[0]).as_float();
            const double b2 = eval(ins.operands[1]).as_float();
            double r = 0.0;
            if (ins.op == Opcode::FAdd) r = a + b2;
            if (ins.op == Opcode::FSub) r = a - b2;
            if (ins.op == Opcode::FMul) r = a * b2;
            if (ins.op == Opcode::FDiv) r = a / b2;
            regs[*ins.result] = Value::of_float(r);
            break;
          }
          case Opcode::Add: case Opcode::Mul: case Opcode::Sub:
          case Opcode::UDiv: case Opcode::SDiv: {
            const long long a = eval(ins.operands[0]).as_int();
            const long long b2 = eval(ins.operands[1]).as_int();
            long long r = 0;
            if (ins.op == Opcode::Add) r = a + b2;
            if (ins.op == Opcode::Sub) r = a - b2;
            if (ins.op == Opcode::Mul) r = a * b2;
            if (ins.op == Opcode::SDiv) {
              if (b2 == 0) throw std::runtime_error("integer division by zero");
              r = a / b2;
            }
            if (ins.op == Opcode::UDiv) {
              if (b2 == 0) throw std::runtime_error("integer division by zero");
              r = static_cast<long long>(static_cast<unsigned long long>(a) /
                                         static_cast<unsigned long long>(b2));
            }
            regs[*ins.result] = Value::of_int(r);
            break;
          }
          case Opcode::ICmp: {
            const long long a = eval(ins.operands[0]).as_int();
            const long long b2 = eval(ins.operands[1]).as_int();
            bool r = false;
            switch (*ins.pred) {
              case CmpPredicate::Eq: r = a == b2; break;
              case CmpPredicate::Ne: r = a != b2; break;
              case CmpPredicate::Slt: r = a < b2; break;
              case CmpPredicate::Sle: r = a <= b2; break;
              case CmpPredicate::Sgt: r = a > b2; break;
              case CmpPredicate::Sge: r = a >= b2; break;
            }
            regs[*ins.result] = Value::of_int(r ? 1 : 0);
            break;
          }
          case Opcode::Mov:
            regs[*ins.result] = eval(ins.operands[0]);
            break;
          case Opcode::Load: {
            const auto& a = std::get<AddressExpr>(ins.operands[0]);
            const long long idx = linear_index(a);
            record(cur, static_cast<int>(pc), a.base, idx, *ins.elem_size, false);
            regs[*ins.result] = Value::of_float(arrays.at(a.base)[idx]);
            break;
          }
          case Opcode::Store: {
            const auto& a = std::get<AddressExpr>(ins.operands[1]);
            const long long idx = linear_index(a);
            record(cur, static_cast<int>(pc), a.base, idx, *ins.elem_size, true);
            arrays.at(a.base)[idx] = eval(ins.operands[0]).as_float();
            break;
          }
          case Opcode::GetElementPtr:
            // Address materialization; no memory traffic.
            regs[*ins.result] = Value::of_int(linear_index(std::get<AddressExpr>(ins.operands[0])));
            break;
          case Opcode::Fence:
            break;
          case Opcode::Ret:
          case Opcode::Resume:
            result.arrays = std::move(arrays);
            return;
          case Opcode::Br: {
            int next;
            if (ins.targets.size() == 1) {
              next = f.block_index(ins.targets[0]);
            } else {
              next = eval(ins.operands[0]).as_int() != 0
                         ? f.block_index(ins.targets[0])
                         : f.block_index(ins.targets[1]);
            }
            prev = cur;
            cur = next;
            goto next_block;
          }
          case Opcode::Switch: {
            const long long sel = eval(ins.operands[0]).as_int();
            const size_t k = (sel >= 0 && sel < static_cast<long long>(ins.targets.size()))
                                 ? static_cast<size_t>(sel)
                                 : 0;
            prev = cur;
            cur = f.block_index(ins.targets[k]);
            goto next_block;
          }
          case Opcode::Phi:
            throw std::runtime_error("phi after non-phi instruction");
        }
      }
      throw std::runtime_error("block fell through without terminator");
    next_block:;
    }
  }

  void record(int block, int instr, const std::string& array, long long idx, int bytes,
              bool is_store) {
    if (!opts.record_trace) return;
    result.trace.push_back(MemAccess{block, instr, array, idx, bytes, is_store});
  }
};

}  // namespace

InterpResult run_function(const FunctionIR& f,
                          const std::map<std::string, long long>& int_params,
                          const std::map<std::string, double>& float_params,
                          std::map<std::string, std::vector<double>> arrays,
                          const InterpOptions& opts) {
  Machine m(f, int_params, float_params, std::move(arrays), opts);
  m.run();
  return std::move(m.result);
}

}  // namespace kergraph::interp
