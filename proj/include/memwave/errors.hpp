#ifndef MEMWAVE_ERRORS_HPP
#define MEMWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace memwave {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Kernel tail mass beyond the quadrature cutoff exceeds tolerance.
class TailError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// mu(tau, s) vanishes where mu(t, s) does not.
class UnboundedRatioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// History query older than the retained window.
class WindowUnderrunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite state or energy above the blow-up threshold.
class NumericalFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sampled pair violates the quasi-stable decomposition inequality.
class ProcessInvalidError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Samples are not on a uniform time grid.
class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace memwave

#endif // MEMWAVE_ERRORS_HPP
