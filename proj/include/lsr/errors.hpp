#pragma once

#include <stdexcept>
#include <string>

namespace lsr {

// Error categories shared by all modules. The CLI maps domain errors to
// exit code 1 and verification failures to exit code 2.
enum class errc {
    not_in_domain,
    degenerate,
    ill_conditioned,
    invalid_word,
    budget_exceeded,
    invalid_quotient,
    depth_exceeded,
    ambiguous_coset,
    enclosure_too_wide,
    overflow,
    no_rational_angle,
    verification_failed,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_in_domain: return "NotInDomain";
        case errc::degenerate: return "Degenerate";
        case errc::ill_conditioned: return "IllConditioned";
        case errc::invalid_word: return "InvalidWord";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::invalid_quotient: return "InvalidQuotient";
        case errc::depth_exceeded: return "DepthExceeded";
        case errc::ambiguous_coset: return "AmbiguousCoset";
        case errc::enclosure_too_wide: return "EnclosureTooWide";
        case errc::overflow: return "Overflow";
        case errc::no_rational_angle: return "NoRationalAngle";
        case errc::verification_failed: return "VerificationFailed";
    }
    return "Unknown";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace lsr
