#pragma once

#include <stdexcept>
#include <string>

namespace hup {

enum class ErrorKind {
    InvalidSpec,
    OutOfDomain,
    DerivativeAtCorner,
    FaceNormalToTheta,
    NoCorners,
    NoCone,
    NotStrictlySupporting,
    InI0,
    MultiFold,
    NotCuspRegime,
    NotClosedCurve,
    NonEmptyI0,
    SameAngle,
    NotDegreeOne,
    HypothesesFail,
    Overlap,
    NotContained,
    QuadratureNotConverged,
    TilingGap,
    StructureAbsent,
    RelationViolated,
    DivisionByZeroLocus,
    TangentLine,
    DegenerateEllipse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, long detail = -1)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(detail) {}

    ErrorKind kind() const { return kind_; }
    // offending step for certificate failures, -1 otherwise
    long detail() const { return detail_; }

private:
    ErrorKind kind_;
    long detail_;
};

} // namespace hup
