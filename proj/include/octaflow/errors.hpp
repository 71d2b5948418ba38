#pragma once

#include <stdexcept>
#include <string>

namespace octaflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

// point lies on {Phi2 Phi3 Phi5 = 0}
struct ExceptionalSet : Error {
  using Error::Error;
};

struct IndeterminatePoint : Error {
  using Error::Error;
};

struct FitError : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

enum class Degeneracy { None, B2, B3, B2B3MinusB5 };

struct DegenerateReduction : Error {
  Degeneracy which;
  DegenerateReduction(Degeneracy w, const std::string& msg) : Error(msg), which(w) {}
};

struct TablesError : Error {
  using Error::Error;
};

}  // namespace octaflow
