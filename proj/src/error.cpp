#include "ldtt/error.hpp"

namespace ldtt {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfScope: return "OutOfScope";
        case ErrorKind::IllFormedNode: return "IllFormedNode";
        case ErrorKind::NegativeIndex: return "NegativeIndex";
        case ErrorKind::LexError: return "LexError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnboundName: return "UnboundName";
        case ErrorKind::DuplicateLinearName: return "DuplicateLinearName";
        case ErrorKind::LinearVarInType: return "LinearVarInType";
        case ErrorKind::DuplicateName: return "DuplicateName";
        case ErrorKind::SortMismatch: return "SortMismatch";
        case ErrorKind::LinearViolation: return "LinearViolation";
        case ErrorKind::ZoneMismatch: return "ZoneMismatch";
        case ErrorKind::ModeError: return "ModeError";
        case ErrorKind::TypeMismatch: return "TypeMismatch";
        case ErrorKind::CannotInfer: return "CannotInfer";
        case ErrorKind::FeatureDisabled: return "FeatureDisabled";
        case ErrorKind::NonTermination: return "NonTermination";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::ModulusMismatch: return "ModulusMismatch";
        case ErrorKind::MissingBasis: return "MissingBasis";
        case ErrorKind::SizeOverflow: return "SizeOverflow";
        case ErrorKind::SortError: return "SortError";
        case ErrorKind::BaseMismatch: return "BaseMismatch";
        case ErrorKind::NotAPullback: return "NotAPullback";
        case ErrorKind::NotInvertibleComponent: return "NotInvertibleComponent";
        case ErrorKind::InvalidStructure: return "InvalidStructure";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace ldtt
