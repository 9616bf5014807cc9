#include "sfl/error.hpp"

namespace sfl {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PoleError: return "PoleError";
        case ErrorKind::PoleInsideDisc: return "PoleInsideDisc";
        case ErrorKind::DiscsOverlap: return "DiscsOverlap";
        case ErrorKind::PairingViolated: return "PairingViolated";
        case ErrorKind::NotEnoughDiscs: return "NotEnoughDiscs";
        case ErrorKind::NotReduced: return "NotReduced";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::Reducible: return "Reducible";
        case ErrorKind::ResolutionExceeded: return "ResolutionExceeded";
        case ErrorKind::CostCap: return "CostCap";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::WindowViolation: return "WindowViolation";
        case ErrorKind::SupportNotOnLine: return "SupportNotOnLine";
        case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorKind::EmptyShell: return "EmptyShell";
        case ErrorKind::MissingEta: return "MissingEta";
        case ErrorKind::PositivityLost: return "PositivityLost";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sfl
