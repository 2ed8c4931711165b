#ifndef TORIFACT_ERRORS_HPP
#define TORIFACT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torifact {

/// Error taxonomy. The CLI maps kinds to process exit codes:
/// validation -> 2, search exhaustion -> 3, certificate mismatch -> 4.
enum class ErrorKind {
    Unbounded,
    DegeneratePolytope,
    NotSimplicial,
    NotRefinement,
    NotCartier,
    SearchExhausted,
    ChamberInconsistent,
    OracleMismatch,
    WallParameter,
    NotElementary,
    EmptySlice,
    ValidationError,
    CertificateMismatch,
    IoError,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    int exit_code() const {
        switch (kind_) {
            case ErrorKind::SearchExhausted: return 3;
            case ErrorKind::CertificateMismatch: return 4;
            case ErrorKind::IoError: return 1;
            case ErrorKind::Internal: return 1;
            default: return 2;
        }
    }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace torifact

#endif // TORIFACT_ERRORS_HPP
