#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace thurston {

enum class Errc {
    InvalidSlope,
    InvalidPair,
    InvalidMatrix,
    ReductionFailed,
    OnEdge,
    LocateFailed,
    EvaluationUnstable,
    RootFindingFailed,
    InvalidPolynomial,
    CommonRoot,
    InverseFailed,
    NearPuncture,
    LiftFailed,
    NotPostcriticallyFinite,
    MarkedSetNotInvariant,
    Degenerate,
    CriticalPointsOffCircle,
    DegenerateCorrespondence,
    ValidationFailed,
    AllCandidatesFailed,
    AmbiguousAnchor,
    AnchorMissing,
    BranchAmbiguous,
    StepUnderflow,
    TileImageAmbiguous,
    Inconclusive,
    AttractorNotClosed,
    NonHyperbolic,
    ConfigError,
    CacheConflict,
};

constexpr std::string_view to_string(Errc e) {
    switch (e) {
        case Errc::InvalidSlope: return "InvalidSlope";
        case Errc::InvalidPair: return "InvalidPair";
        case Errc::InvalidMatrix: return "InvalidMatrix";
        case Errc::ReductionFailed: return "ReductionFailed";
        case Errc::OnEdge: return "OnEdge";
        case Errc::LocateFailed: return "LocateFailed";
        case Errc::EvaluationUnstable: return "EvaluationUnstable";
        case Errc::RootFindingFailed: return "RootFindingFailed";
        case Errc::InvalidPolynomial: return "InvalidPolynomial";
        case Errc::CommonRoot: return "CommonRoot";
        case Errc::InverseFailed: return "InverseFailed";
        case Errc::NearPuncture: return "NearPuncture";
        case Errc::LiftFailed: return "LiftFailed";
        case Errc::NotPostcriticallyFinite: return "NotPostcriticallyFinite";
        case Errc::MarkedSetNotInvariant: return "MarkedSetNotInvariant";
        case Errc::Degenerate: return "Degenerate";
        case Errc::CriticalPointsOffCircle: return "CriticalPointsOffCircle";
        case Errc::DegenerateCorrespondence: return "DegenerateCorrespondence";
        case Errc::ValidationFailed: return "ValidationFailed";
        case Errc::AllCandidatesFailed: return "AllCandidatesFailed";
        case Errc::AmbiguousAnchor: return "AmbiguousAnchor";
        case Errc::AnchorMissing: return "AnchorMissing";
        case Errc::BranchAmbiguous: return "BranchAmbiguous";
        case Errc::StepUnderflow: return "StepUnderflow";
        case Errc::TileImageAmbiguous: return "TileImageAmbiguous";
        case Errc::Inconclusive: return "Inconclusive";
        case Errc::AttractorNotClosed: return "AttractorNotClosed";
        case Errc::NonHyperbolic: return "NonHyperbolic";
        case Errc::ConfigError: return "ConfigError";
        case Errc::CacheConflict: return "CacheConflict";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the library. The code is
/// machine readable; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

    Errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    Errc code_;
    std::string message_;
};

/// Raised by continuation when a path cannot be followed; carries the point
/// of the Teichmueller-space path where the step control gave up.
class PathError : public Error {
public:
    PathError(Errc code, const std::string& what, std::complex<double> where)
        : Error(code, what), where_(where) {}

    std::complex<double> where() const noexcept { return where_; }

private:
    std::complex<double> where_;
};

}  // namespace thurston
