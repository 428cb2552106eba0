#include "softbandit/errors.hpp"

namespace softbandit {

const char* to_string(ServiceErrorKind kind) {
  switch (kind) {
    case ServiceErrorKind::Connection:
      return "connection";
    case ServiceErrorKind::Timeout:
      return "timeout";
    case ServiceErrorKind::MalformedResponse:
      return "malformed-response";
    case ServiceErrorKind::Status:
      return "status";
  }
  return "unknown";
}

}  // namespace softbandit
