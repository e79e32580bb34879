#pragma once

#include <stdexcept>
#include <string>

namespace ccgeo {

enum class Code {
  MALFORMED_DOCUMENT,
  DISCONNECTED,
  BAD_LATTICE,
  BAD_EDGE,
  MISSING_BASEPOINT,
  UNKNOWN_VERTEX,
  DEPTH_TOO_SMALL,
  ENDPOINT_MISMATCH,
  EMPTY_SAMPLE,
  BAD_PARAMS,
  NOT_BIPARTITE,
  CUT_NOT_IN_LATTICE,
  DISCONNECTED_ASSEMBLY,
  BAD_DEPTH,
  BAD_LEVEL,
  RADIUS_TOO_LARGE,
  BASEPOINT_MISMATCH,
  BAD_THRESHOLD,
  NOT_FULLY_AUGMENTED,
  NEVER_MEETS,
  DIVISION_BY_ZERO,
};

const char* code_name(Code c);

class Error : public std::runtime_error {
 public:
  Error(Code code, const std::string& what)
      : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

}  // namespace ccgeo
