#pragma once

#include <stdexcept>
#include <string>

namespace sfl {

enum class ErrorKind {
    PoleError,
    PoleInsideDisc,
    DiscsOverlap,
    PairingViolated,
    NotEnoughDiscs,
    NotReduced,
    NonConvergence,
    Reducible,
    ResolutionExceeded,
    CostCap,
    DegenerateFit,
    WindowViolation,
    SupportNotOnLine,
    ZeroPolynomial,
    EmptyShell,
    MissingEta,
    PositivityLost,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace sfl
