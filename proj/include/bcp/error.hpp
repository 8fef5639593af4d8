#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcp {

/// Malformed or inconsistent input (bad shapes, crossed boundaries, dimension
/// mismatch). The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric precondition of a bound or estimator is violated (argument
/// outside the admissible interval, regime constraint broken).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested operation is not available for this shape or family.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A Monte-Carlo request cannot reach the requested confidence with the given
/// sample count. Carries the sample count that would be needed.
class SampleSizeError : public std::runtime_error {
public:
    SampleSizeError(const std::string& what, std::size_t required_n)
        : std::runtime_error(what), required_n_(required_n) {}

    std::size_t required_n() const noexcept { return required_n_; }

private:
    std::size_t required_n_;
};

}  // namespace bcp
