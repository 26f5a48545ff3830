#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothlm {

using WordId = std::uint32_t;
using Count = std::int64_t;
using Sentence = std::vector<WordId>;

// Malformed or insufficient input data (maps to CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model or optimizer parameter outside its legal domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical procedure could not produce a result (e.g. too few points to fit).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smoothlm
