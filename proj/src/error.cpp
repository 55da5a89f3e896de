#include "hardy/error.hpp"

namespace hardy {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Capacity: return "capacity";
        case ErrorKind::Numeric: return "numeric";
        case ErrorKind::IllConditioned: return "ill-conditioned";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::Dependency: return "dependency";
        case ErrorKind::Contract: return "contract";
        case ErrorKind::Invariant: return "invariant";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

}  // namespace hardy
