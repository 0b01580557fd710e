#pragma once

#include <stdexcept>
#include <string>

namespace ctv {

/// Bad argument values (non-finite input, out-of-range parameters, ...).
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Shapes or signatures of two operands do not agree.
class DimensionMismatch : public InvalidArgument {
public:
    explicit DimensionMismatch(const std::string& what) : InvalidArgument(what) {}
};

/// Input data cannot be used (all pixels masked, corrupt file, disconnected covering).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A configuration that admits no feasible point, e.g. a violated inpainting constraint.
class Infeasible : public std::runtime_error {
public:
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctv
