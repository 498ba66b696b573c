// Typed error hierarchy shared by the whole library. The three categories map
// one-to-one onto process exit codes and C API status values:
//   ParamError   -> 2  (invalid parameters, or parameters outside every
//                       regime a solver is specified for)
//   SolverError  -> 3  (an iteration failed to converge, was trapped at a
//                       constraint boundary, or captured the wrong branch)
//   NumericError -> 4  (non-finite values, quadrature breakdown)
#pragma once

#include <stdexcept>
#include <string>

namespace nsol {

class ParamError : public std::runtime_error {
public:
  explicit ParamError(const std::string &what) : std::runtime_error(what) {}
};

class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string &what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace nsol
