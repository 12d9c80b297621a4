#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ratquad
{
/// Input violates a documented invariant (bad geometry, bad arguments, bad files).
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not deliver its accuracy contract.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Collects non-fatal warnings produced while building rules.
struct Diagnostics
{
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

}  // namespace ratquad
