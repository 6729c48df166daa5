#pragma once

#include <stdexcept>
#include <string>

namespace spinj {

/// Invalid input: out-of-range family parameter, malformed option, etc.
/// The CLI maps this to exit code 2.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce its result. Carries a stable,
/// machine-readable reason code (RLD_SINGULAR, BFY_FAILS, ...).
class ComputationError : public std::runtime_error {
public:
    ComputationError(std::string reason, const std::string& what)
        : std::runtime_error(what), reason_(std::move(reason)) {}

    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
};

namespace reason {
inline constexpr const char* kNotHermitian = "NOT_HERMITIAN";
inline constexpr const char* kLeavesSupport = "LEAVES_SUPPORT";
inline constexpr const char* kRldSingular = "RLD_SINGULAR";
inline constexpr const char* kFisherSingular = "FISHER_SINGULAR";
inline constexpr const char* kConstraintViolated = "XSTAR_CONSTRAINT";
inline constexpr const char* kBfyFails = "BFY_FAILS";
inline constexpr const char* kNoLowerSpace = "NO_LOWER_SPACE";
inline constexpr const char* kAcceptance = "PATHOLOGICAL_ACCEPTANCE";
inline constexpr const char* kNoAsymptotic = "NO_ASYMPTOTIC";
inline constexpr const char* kNotComputed = "NOT_REQUESTED";
}  // namespace reason

}  // namespace spinj
