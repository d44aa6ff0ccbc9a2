#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dhtwin {

enum class Errc {
  ParseError,
  NonUniformGrid,
  EmptyFile,
  GridMismatch,
  IoError,
  OutOfRange,
  NonFiniteInput,
  NonPositiveInput,
  InvalidArgument,
  RankDeficient,
  MalformedProblem,
  DimensionMismatch,
  HorizonTooLong,
  InconsistentParams,
  NotOptimal,
  InternalConsistency,
  DataExhausted,
  ConfigInvalid,
  PeriodMismatch,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dhtwin
