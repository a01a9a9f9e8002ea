#pragma once

#include <stdexcept>
#include <string>

namespace cstarmod {

/// An extended (+infinity) element reached an operation defined only for
/// finite elements.
class ExtendedValueError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid parameter or malformed configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operands with incompatible dimensions or grid shapes.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A bracketing or infimum search ran past its admissible range.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The supplied problem instance fails an identity it promises to satisfy.
class InconsistentInstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace cstarmod
