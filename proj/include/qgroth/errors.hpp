#pragma once

#include <stdexcept>
#include <string>

namespace qgroth {

// Base for every domain error.  `kind()` is the stable name shown by the CLI.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define QGROTH_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                             \
  public:                                                                 \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  }

QGROTH_DEFINE_ERROR(NotInvertible);
QGROTH_DEFINE_ERROR(InsufficientPrecision);
QGROTH_DEFINE_ERROR(InvalidParts);
QGROTH_DEFINE_ERROR(ParseError);
QGROTH_DEFINE_ERROR(ValidationError);
QGROTH_DEFINE_ERROR(DanglingReference);
QGROTH_DEFINE_ERROR(ZeroModule);
QGROTH_DEFINE_ERROR(NotAModuleMap);
QGROTH_DEFINE_ERROR(PrecisionUnderflow);
QGROTH_DEFINE_ERROR(NotAsymptoticallyDecreasing);
QGROTH_DEFINE_ERROR(WeightTooHigh);
QGROTH_DEFINE_ERROR(AmplitudeUnbounded);
QGROTH_DEFINE_ERROR(ShapeMismatch);
QGROTH_DEFINE_ERROR(BasisMismatch);
QGROTH_DEFINE_ERROR(InconsistentSystem);

#undef QGROTH_DEFINE_ERROR

}  // namespace qgroth
