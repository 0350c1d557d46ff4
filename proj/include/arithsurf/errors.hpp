#pragma once

#include <stdexcept>
#include <string>

namespace arithsurf {

// Base class for every domain error raised by the library. `name()` is the
// stable identifier the CLI reports verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define ARITHSURF_DEFINE_ERROR(Type)                                   \
    class Type : public Error {                                        \
    public:                                                            \
        explicit Type(const std::string& what) : Error(#Type, what) {} \
    };

ARITHSURF_DEFINE_ERROR(CompositeModulus)
ARITHSURF_DEFINE_ERROR(WindowExhausted)
ARITHSURF_DEFINE_ERROR(NotLocallyFree)
ARITHSURF_DEFINE_ERROR(ProfileInconsistent)
ARITHSURF_DEFINE_ERROR(ParityViolation)
ARITHSURF_DEFINE_ERROR(IdentityViolation)
ARITHSURF_DEFINE_ERROR(DegreeMismatch)
ARITHSURF_DEFINE_ERROR(DuplicatePrime)
ARITHSURF_DEFINE_ERROR(UnsupportedCenter)
ARITHSURF_DEFINE_ERROR(NotGeneralPosition)
ARITHSURF_DEFINE_ERROR(TooManyPoints)
ARITHSURF_DEFINE_ERROR(InvalidInput)

#undef ARITHSURF_DEFINE_ERROR

// Raised when a fiber map fails to be surjective; carries the first twist at
// which the cokernel piece is nonzero.
class NotSurjective : public Error {
public:
    NotSurjective(const std::string& what, long witness_degree)
        : Error("NotSurjective", what), witness_degree_(witness_degree) {}

    long witness_degree() const noexcept { return witness_degree_; }

private:
    long witness_degree_;
};

}  // namespace arithsurf
