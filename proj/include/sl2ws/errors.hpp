#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sl2ws {

enum class Errc {
  OddVertexCount,
  DuplicateLabel,
  SchemaError,
  DanglingHalfEdge,
  SlotMismatch,
  RepeatedLabel,
  LabelOutOfRange,
  NoExactSolution,
  NotInternalEdge,
  NotATree,
  BadLabelSet,
  NonIntegerRecurrence,
  DependentBasis,
  NotInInvariantSpan,
  PreconditionViolation,
  NotUnitriangular,
  PoleAtOne,
  BadWeightIndex,
  InexactDivision,
  NegativeMultiplicity,
  OddN,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::OddVertexCount: return "OddVertexCount";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::SchemaError: return "SchemaError";
    case Errc::DanglingHalfEdge: return "DanglingHalfEdge";
    case Errc::SlotMismatch: return "SlotMismatch";
    case Errc::RepeatedLabel: return "RepeatedLabel";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::NoExactSolution: return "NoExactSolution";
    case Errc::NotInternalEdge: return "NotInternalEdge";
    case Errc::NotATree: return "NotATree";
    case Errc::BadLabelSet: return "BadLabelSet";
    case Errc::NonIntegerRecurrence: return "NonIntegerRecurrence";
    case Errc::DependentBasis: return "DependentBasis";
    case Errc::NotInInvariantSpan: return "NotInInvariantSpan";
    case Errc::PreconditionViolation: return "PreconditionViolation";
    case Errc::NotUnitriangular: return "NotUnitriangular";
    case Errc::PoleAtOne: return "PoleAtOne";
    case Errc::BadWeightIndex: return "BadWeightIndex";
    case Errc::InexactDivision: return "InexactDivision";
    case Errc::NegativeMultiplicity: return "NegativeMultiplicity";
    case Errc::OddN: return "OddN";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sl2ws
