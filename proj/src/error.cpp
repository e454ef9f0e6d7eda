#include "degenhj/error.hpp"

namespace degenhj {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidInput: return "invalid input";
        case ErrorCode::Dimension: return "dimension error";
        case ErrorCode::DegeneratePoint: return "degenerate point";
        case ErrorCode::Numeric: return "numeric error";
        case ErrorCode::Divergence: return "divergence";
        case ErrorCode::Ordering: return "ordering error";
        case ErrorCode::Region: return "region error";
        case ErrorCode::OutOfScope: return "out of lemma scope";
        case ErrorCode::Configuration: return "configuration error";
        case ErrorCode::Range: return "range error";
        case ErrorCode::EmptySample: return "empty sample";
    }
    return "unknown error";
}

}  // namespace degenhj
