#pragma once

#include <map>
#include <string>
#include <vector>

#include "kergraph/ir.hpp"

namespace kergraph::interp {

struct Value {
  bool is_float = false;
  long long i = 0;
  double f = 0.0;

  static Value of_int(long long v) { return {false, v, 0.0}; }
  static Value of_float(double v) { return {true, 0, v}; }
  double as_float() const { return is_float ? f : static_cast<double>(i); }
  long long as_int() const;
};

struct MemAccess {
  int block = 0;       // block index in FunctionIR
  int instr = 0;       // instruction index within the block
  std::string array;
  long long index = 0;  // linear element index (row-major)
  int bytes = 0;
  bool is_store = false;
};

struct InterpOptions {
  long long max_steps = 50'000'000;
  bool record_trace = false;
};

struct InterpResult {
  std::map<std::string, std::vector<double>> arrays;  // final contents
  std::vector<MemAccess> trace;
  long long steps = 0;
};

// Resolves an array's concrete dimensions using integer parameter values.
std::vector<long long> resolve_dims(const ir::Param& p,
                                    const std::map<std::string, long long>& int_params);

// Allocates buffers for every array parameter, filled with a deterministic
// pseudo-random pattern derived from `fill_seed`.
std::map<std::string, std::vector<double>> alloc_arrays(
    const ir::FunctionIR& f, const std::map<std::string, long long>& int_params,
    uint64_t fill_seed);

// Executes a function to completion. Scalar parameters are taken from
// `int_params` / `float_params`; arrays from `arrays` (moved in, returned in
// the result). Throws std::runtime_error on dynamic errors (type mismatch,
// out-of-bounds access, step limit).
InterpResult run_function(const ir::FunctionIR& f,
                          const std::map<std::string, long long>& int_params,
                          const std::map<std::string, double>& float_params,
                          std::map<std::string, std::vector<double>> arrays,
                          const InterpOptions& opts = {});

}  // namespace kergraph::interp
