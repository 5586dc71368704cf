#pragma once

#include <stdexcept>
#include <string>

#include "solab/e2_skew.hpp"
#include "solab/frame.hpp"

namespace solab::spec {

// Malformed or inconsistent JSON document; the message names the offending
// key.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Frame structure from a JSON document. The schema is described in
// docs/frame_spec.md: an optional built-in family ("heisenberg",
// "heisenberg-cone", "heisenberg-cusp", "e2", "steady-II") supplies every
// coefficient, and "coefficients", "potential" and "perturb" override or
// shift individual ones. Expressions are in the variable tau.
frame::FrameStructure load_frame_spec(const std::string& json_text);
frame::FrameStructure load_frame_spec_file(const std::string& path);

// Epsilon profile from a JSON document:
//   {"builtin": "zero" | "quadratic-bump" | "poly", "beta": x}
//   {"name": s, "expression": "<expression in b>"}
//   {"name": s, "even_polynomial": [c0, c1, ...]}   (sum c_k b^{2k})
// Admissibility is not checked here.
e2::EpsilonProfile load_epsilon_profile(const std::string& json_text);
e2::EpsilonProfile load_epsilon_profile_file(const std::string& path);
// A built-in name ("zero", "quadratic-bump") or a path to a JSON file.
e2::EpsilonProfile epsilon_from_argument(const std::string& name_or_path);

}  // namespace solab::spec
