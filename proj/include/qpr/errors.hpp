#pragma once

#include <stdexcept>
#include <string>

namespace qpr {

// Domain error carrying a stable machine-readable code. The CLI surfaces the
// code verbatim in its "error" output field.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct ZeroVectorError : Error {
    ZeroVectorError() : Error("ZeroVector", "cannot normalize a zero vector") {}
};

struct EmptySupportError : Error {
    EmptySupportError() : Error("EmptySupport", "all amplitudes are below the support tolerance") {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& message)
        : Error("DimensionMismatch", message) {}
};

struct InvalidDistributionError : Error {
    explicit InvalidDistributionError(const std::string& message)
        : Error("InvalidDistribution", message) {}
};

struct NotNormalizedError : Error {
    explicit NotNormalizedError(double norm)
        : Error("NotNormalized",
                "state norm is " + std::to_string(norm) + ", expected 1; renormalizing is opt-in") {}
};

struct BadInputError : Error {
    explicit BadInputError(const std::string& message) : Error("BadInput", message) {}
};

struct IncompletePovmError : Error {
    IncompletePovmError() : Error("IncompletePovm", "POVM elements do not sum to identity") {}
};

struct ImpossibleOutcomeError : Error {
    ImpossibleOutcomeError() : Error("ImpossibleOutcome", "POVM outcome has zero probability on this state") {}
};

// Raised when a partial-sum magnitude drops to ~0 and the recursive phase
// solve cannot continue. `index` is the partial-sum index that vanished
// (-1 when the thrower does not know it; the enumerator fills it in).
struct ChainBrokenError : Error {
    int index;
    explicit ChainBrokenError(int index_ = -1)
        : Error("ChainBroken",
                "phase chain broken: partial sum vanished" +
                    (index_ >= 0 ? " at index " + std::to_string(index_) : std::string{})),
          index(index_) {}
};

struct InconsistentDistributionsError : Error {
    explicit InconsistentDistributionsError(const std::string& message)
        : Error("InconsistentDistributions", message) {}
};

struct SingularSystemError : Error {
    explicit SingularSystemError(const std::string& message)
        : Error("SingularSystem", message) {}
};

struct InconsistentProbabilitiesError : Error {
    explicit InconsistentProbabilitiesError(const std::string& message)
        : Error("InconsistentProbabilities", message) {}
};

// Support is exactly a two-site pair separated by dim/2; no pairwise ordering
// avoids the singular Fourier system, so the Pauli fallback is required.
struct FailingSetError : Error {
    int site_low;
    int site_high;
    int dim;
    FailingSetError(int low, int high, int d)
        : Error("FailingSet",
                "support {" + std::to_string(low) + "," + std::to_string(high) +
                    "} is separated by dim/2 = " + std::to_string(d / 2)),
          site_low(low), site_high(high), dim(d) {}
};

struct DimensionCapError : Error {
    explicit DimensionCapError(int sites, int cap)
        : Error("DimensionCapExceeded",
                "enumeration over " + std::to_string(sites) + " phase sites exceeds the cap of " +
                    std::to_string(cap) + "; pass force to override") {}
};

struct SearchSpaceCapError : Error {
    explicit SearchSpaceCapError(const std::string& message)
        : Error("SearchSpaceCapExceeded", message) {}
};

} // namespace qpr
