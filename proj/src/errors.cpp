#include "frame_iterates/errors.hpp"

namespace fi {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidMatrix: return "InvalidMatrix";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::ShapeError: return "ShapeError";
        case ErrorKind::DegenerateFamily: return "DegenerateFamily";
        case ErrorKind::LinearlyDependent: return "LinearlyDependent";
        case ErrorKind::NotRepresentable: return "NotRepresentable";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::NotApplicable: return "NotApplicable";
        case ErrorKind::ContractViolation: return "ContractViolation";
        case ErrorKind::SpecError: return "SpecError";
        case ErrorKind::InvalidPartition: return "InvalidPartition";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Error";
}

}  // namespace fi
