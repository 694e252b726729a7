#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- parameter validation ---------------------------------------------------

class NonPositiveParameter : public Error {
public:
    using Error::Error;
};

/// a*c < (2*hbar*lambda/(m*omega0))^2 : no real b exists.
class ErmakovConditionViolated : public Error {
public:
    using Error::Error;
};

/// lambda = 0 degenerates the Gaussian width channel.
class ZeroLambda : public Error {
public:
    using Error::Error;
};

// --- special functions ------------------------------------------------------

class DegreeTooLarge : public Error {
public:
    using Error::Error;
};

/// Kummer 1F1 with b a nonpositive integer.
class PoleInB : public Error {
public:
    using Error::Error;
};

class NonConvergent : public Error {
public:
    using Error::Error;
};

// --- grids and quadrature ---------------------------------------------------

class GridMismatch : public Error {
public:
    using Error::Error;
};

class TimeMismatch : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class ZeroNorm : public Error {
public:
    using Error::Error;
};

// --- Darboux layer ----------------------------------------------------------

/// Evaluation outside the certified / representable chi range.
class OutOfWindow : public Error {
public:
    using Error::Error;
};

/// chi^2 beyond the supported argument range of the 1F1 kernels.
class OutOfSupport : public Error {
public:
    using Error::Error;
};

/// Requested transformation is not nodeless on the scan window.
class CertificationFailure : public Error {
public:
    using Error::Error;
};

/// Missing state 1/(l u*) fails the square-integrability check.
class NotNormalizable : public Error {
public:
    using Error::Error;
};

// --- expansions -------------------------------------------------------------

class CapExceeded : public Error {
public:
    using Error::Error;
};

class CapTooSmall : public Error {
public:
    using Error::Error;
};

// --- configuration ----------------------------------------------------------

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dlab
