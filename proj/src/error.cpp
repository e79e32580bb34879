#include "ccgeo/error.hpp"

namespace ccgeo {

const char* code_name(Code c) {
  switch (c) {
    case Code::MALFORMED_DOCUMENT: return "MALFORMED_DOCUMENT";
    case Code::DISCONNECTED: return "DISCONNECTED";
    case Code::BAD_LATTICE: return "BAD_LATTICE";
    case Code::BAD_EDGE: return "BAD_EDGE";
    case Code::MISSING_BASEPOINT: return "MISSING_BASEPOINT";
    case Code::UNKNOWN_VERTEX: return "UNKNOWN_VERTEX";
    case Code::DEPTH_TOO_SMALL: return "DEPTH_TOO_SMALL";
    case Code::ENDPOINT_MISMATCH: return "ENDPOINT_MISMATCH";
    case Code::EMPTY_SAMPLE: return "EMPTY_SAMPLE";
    case Code::BAD_PARAMS: return "BAD_PARAMS";
    case Code::NOT_BIPARTITE: return "NOT_BIPARTITE";
    case Code::CUT_NOT_IN_LATTICE: return "CUT_NOT_IN_LATTICE";
    case Code::DISCONNECTED_ASSEMBLY: return "DISCONNECTED_ASSEMBLY";
    case Code::BAD_DEPTH: return "BAD_DEPTH";
    case Code::BAD_LEVEL: return "BAD_LEVEL";
    case Code::RADIUS_TOO_LARGE: return "RADIUS_TOO_LARGE";
    case Code::BASEPOINT_MISMATCH: return "BASEPOINT_MISMATCH";
    case Code::BAD_THRESHOLD: return "BAD_THRESHOLD";
    case Code::NOT_FULLY_AUGMENTED: return "NOT_FULLY_AUGMENTED";
    case Code::NEVER_MEETS: return "NEVER_MEETS";
    case Code::DIVISION_BY_ZERO: return "DIVISION_BY_ZERO";
  }
  return "UNKNOWN";
}

}  // namespace ccgeo
