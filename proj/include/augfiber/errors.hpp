#pragma once

#include <stdexcept>
#include <string>

namespace augfiber {

enum class errc {
  // diagram-core
  malformed_code,
  non_closing,
  not_sphere,
  not_two_colorable,
  // augment-pipeline
  odd_twist_region,
  unaligned_circle,
  unsupported_region,
  // augmented-model
  not_flat,
  non_orientable_surface,
  unbounded_not_c_region,
  unsupported_deplumb,
  // stallings-oracle
  has_a_circles,
  empty_diagram,
  rank_mismatch,
  step_budget_exceeded,
  oracle_inconclusive,
  // moves
  not_a_circle_of_type_a,
  not_a_tree,
  no_bridging_a_circle,
  not_locally_alternating,
  // generic
  bad_input,
  overflow,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_code: return "diagram-core/MalformedCode";
    case errc::non_closing: return "diagram-core/NonClosing";
    case errc::not_sphere: return "diagram-core/NotSphere";
    case errc::not_two_colorable: return "diagram-core/NotTwoColorable";
    case errc::odd_twist_region: return "augment-pipeline/OddTwistRegion";
    case errc::unaligned_circle: return "augment-pipeline/UnalignedCircle";
    case errc::unsupported_region: return "augment-pipeline/UnsupportedRegion";
    case errc::not_flat: return "augmented-model/NotFlat";
    case errc::non_orientable_surface: return "augmented-model/NonOrientableSurface";
    case errc::unbounded_not_c_region: return "augmented-model/UnboundedNotCRegion";
    case errc::unsupported_deplumb: return "augmented-model/UnsupportedDeplumb";
    case errc::has_a_circles: return "stallings-oracle/HasACircles";
    case errc::empty_diagram: return "stallings-oracle/EmptyDiagram";
    case errc::rank_mismatch: return "stallings-oracle/RankMismatch";
    case errc::step_budget_exceeded: return "stallings-oracle/StepBudgetExceeded";
    case errc::oracle_inconclusive: return "stallings-oracle/OracleInconclusive";
    case errc::not_a_circle_of_type_a: return "moves/NotACircleOfTypeA";
    case errc::not_a_tree: return "moves/NotATree";
    case errc::no_bridging_a_circle: return "moves/NoBridgingACircle";
    case errc::not_locally_alternating: return "moves/NotLocallyAlternating";
    case errc::bad_input: return "cli/BadInput";
    case errc::overflow: return "stallings-oracle/Overflow";
  }
  return "unknown";
}

// Library-wide exception type. The code survives the throw so the CLI can
// report module-qualified error names and pick exit codes.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace augfiber
