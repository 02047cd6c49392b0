#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oit {

enum class Errc {
    InvalidArgument,
    LevelMismatch,
    CapExceeded,
    NonUnitDet,
    BadEpsilon,
    NotRegularSemisimple,
    LevelTooLow,
    Inconclusive,
    PreconditionFailed,
    TheoremViolation,
    SingularCurve,
    FactorizationTimeout,
    BadReduction,
    NotSquarefree,
    Ramified,
    BoundViolation,
    NoWitnessWithinBound,
    BadPrime,
    NotAGroup,
    CacheCorrupt,
};

constexpr std::string_view errc_name(Errc c) {
    switch (c) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::LevelMismatch: return "LevelMismatch";
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::NonUnitDet: return "NonUnitDet";
        case Errc::BadEpsilon: return "BadEpsilon";
        case Errc::NotRegularSemisimple: return "NotRegularSemisimple";
        case Errc::LevelTooLow: return "LevelTooLow";
        case Errc::Inconclusive: return "Inconclusive";
        case Errc::PreconditionFailed: return "PreconditionFailed";
        case Errc::TheoremViolation: return "TheoremViolation";
        case Errc::SingularCurve: return "SingularCurve";
        case Errc::FactorizationTimeout: return "FactorizationTimeout";
        case Errc::BadReduction: return "BadReduction";
        case Errc::NotSquarefree: return "NotSquarefree";
        case Errc::Ramified: return "Ramified";
        case Errc::BoundViolation: return "BoundViolation";
        case Errc::NoWitnessWithinBound: return "NoWitnessWithinBound";
        case Errc::BadPrime: return "BadPrime";
        case Errc::NotAGroup: return "NotAGroup";
        case Errc::CacheCorrupt: return "CacheCorrupt";
    }
    return "Unknown";
}

/// Every failure raised by the library. The code is what callers branch on;
/// the message is for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

    /// Falsification findings: a proven statement failed on concrete data.
    bool is_violation() const noexcept {
        return code_ == Errc::TheoremViolation || code_ == Errc::BoundViolation;
    }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace oit
