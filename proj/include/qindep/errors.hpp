#ifndef QINDEP_ERRORS_HPP
#define QINDEP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

// Argument and domain violations are reported with std::invalid_argument and
// std::out_of_range. The types below cover the failure modes that carry domain
// meaning of their own.

namespace qindep {

// Observed data cannot identify anything (a treatment arm is empty or
// constant).
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A propensity score disagrees with the marginal treatment probability it is
// paired with.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A linear program has an empty feasible set.
class InfeasibleProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A user supplied function returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when not line oriented.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qindep

#endif  // QINDEP_ERRORS_HPP
