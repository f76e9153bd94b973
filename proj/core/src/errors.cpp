#include "wlsapprox/errors.hpp"

namespace wlsapprox {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::sampling: return "sampling";
    case ErrorKind::acceptance_failure: return "acceptance_failure";
    case ErrorKind::truncation_exceeded: return "truncation_exceeded";
    case ErrorKind::degenerate_node: return "degenerate_node";
    case ErrorKind::contract_violation: return "contract_violation";
    case ErrorKind::invariant_violation: return "invariant_violation";
  }
  return "unknown";
}

}  // namespace wlsapprox
