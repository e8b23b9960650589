#include "jgas/error.hpp"

namespace jgas {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySpec: return "EmptySpec";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NonUnivalent: return "NonUnivalent";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::BranchUnwrapFailure: return "BranchUnwrapFailure";
    case ErrorKind::KappaGeOne: return "KappaGeOne";
    case ErrorKind::CrossCheckFailure: return "CrossCheckFailure";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorKind::SolveFailure: return "SolveFailure";
    case ErrorKind::Collision: return "Collision";
    case ErrorKind::NonFiniteEnergy: return "NonFiniteEnergy";
    case ErrorKind::GridExplosion: return "GridExplosion";
    case ErrorKind::NodeFailure: return "NodeFailure";
  }
  return "Unknown";
}

}  // namespace jgas
