#ifndef TDEG_ERROR_HPP
#define TDEG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdeg {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TDEG_DEFINE_ERROR(Name)                    \
  class Name : public Error {                      \
   public:                                         \
    explicit Name(const std::string& what)         \
        : Error(std::string(#Name ": ") + what) {} \
  }

// exactla
TDEG_DEFINE_ERROR(SingularMatrix);
TDEG_DEFINE_ERROR(DimensionMismatch);
// words
TDEG_DEFINE_ERROR(EmptyCycle);
TDEG_DEFINE_ERROR(NotProlongable);
TDEG_DEFINE_ERROR(NegativeBlock);
TDEG_DEFINE_ERROR(NotNatural);
TDEG_DEFINE_ERROR(OutOfRange);
// fst
TDEG_DEFINE_ERROR(BadLetter);
TDEG_DEFINE_ERROR(MissingTransition);
// weights
TDEG_DEFINE_ERROR(ShortWindow);
// synthesis
TDEG_DEFINE_ERROR(UnsupportedWeights);
TDEG_DEFINE_ERROR(NotInQk);
// polyatoms
TDEG_DEFINE_ERROR(ZeroOrder);
TDEG_DEFINE_ERROR(NonPositiveCoefficient);
TDEG_DEFINE_ERROR(BudgetExhausted);
TDEG_DEFINE_ERROR(BadWeights);
// general
TDEG_DEFINE_ERROR(InvalidArgument);

#undef TDEG_DEFINE_ERROR

/// Malformed text input. Carries the 1-based line number (0 when the whole
/// input is at fault, e.g. empty).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("ParseError: line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tdeg

#endif  // TDEG_ERROR_HPP
