#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seedseg {

/// Node index outside the closed grid.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Two objects that must share a grid (or a size) do not.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Out-of-domain numeric parameter (epsilon <= 0, omega outside (0,2), ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure decoding an image or mask. `offset()` is the byte position where
/// decoding stopped, or npos when the failure is not tied to a position.
class IngestError : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit IngestError(const std::string& what, std::size_t offset = npos)
        : std::runtime_error(offset == npos ? what : what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    /// Same error with `prefix` (e.g. a path) in front of the message.
    IngestError(const std::string& prefix, const IngestError& inner)
        : std::runtime_error(prefix + inner.what()), offset_(inner.offset_) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class SceneError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A node would be labelled both Inside and Outside.
class MaskConflictError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConstraintConflictError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The linear system violates a solver precondition (non-positive diagonal).
class SolverContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The brute-force LCP oracle found no consistent active set.
class OracleFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace seedseg
