#pragma once

#include <stdexcept>
#include <string>

namespace dary {

enum class Errc {
  invalid_arity,
  not_a_leaf,
  cannot_detach_root,
  cannot_remove_root,
  arity_mismatch,
  stale_node,
  malformed_code,
  malformed_marks,
  mark_count,
  not_excursion,
  corrupt_input,
  letter_out_of_range,
  rotation_out_of_range,
  size_guard,
  underpowered,
  invalid_argument,
  parse_error,
};

inline const char* to_string(Errc e) {
  switch (e) {
    case Errc::invalid_arity: return "invalid-arity";
    case Errc::not_a_leaf: return "not-a-leaf";
    case Errc::cannot_detach_root: return "cannot-detach-root";
    case Errc::cannot_remove_root: return "cannot-remove-root";
    case Errc::arity_mismatch: return "arity-mismatch";
    case Errc::stale_node: return "stale-node";
    case Errc::malformed_code: return "malformed-code";
    case Errc::malformed_marks: return "malformed-marks";
    case Errc::mark_count: return "mark-count";
    case Errc::not_excursion: return "not-excursion";
    case Errc::corrupt_input: return "corrupt-input";
    case Errc::letter_out_of_range: return "letter-out-of-range";
    case Errc::rotation_out_of_range: return "rotation-out-of-range";
    case Errc::size_guard: return "size-guard";
    case Errc::underpowered: return "underpowered";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::parse_error: return "parse-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the Errc kinds.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dary
