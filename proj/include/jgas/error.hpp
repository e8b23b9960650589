#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jgas {

enum class ErrorKind {
  EmptySpec,
  InvalidConfig,
  NonUnivalent,
  OutOfRange,
  GridTooSmall,
  BranchUnwrapFailure,
  KappaGeOne,
  CrossCheckFailure,
  TailTooLarge,
  IllConditioned,
  QuadratureDivergence,
  SolveFailure,
  Collision,
  NonFiniteEnergy,
  GridExplosion,
  NodeFailure,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the library carries a kind so the CLI can map it
// onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Validation errors are problems with the input; everything else is numerical.
  bool is_validation() const noexcept {
    return kind_ == ErrorKind::EmptySpec || kind_ == ErrorKind::InvalidConfig ||
           kind_ == ErrorKind::OutOfRange || kind_ == ErrorKind::GridTooSmall ||
           kind_ == ErrorKind::NonUnivalent || kind_ == ErrorKind::GridExplosion;
  }

 private:
  ErrorKind kind_;
};

}  // namespace jgas
