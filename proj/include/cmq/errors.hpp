#pragma once

#include <stdexcept>
#include <string>

namespace cmq {

// Exit-code family used by the command line front end.
enum class ErrorClass { input, precision, unsupported, verification };

class Error : public std::runtime_error {
public:
    Error(const char* kind, ErrorClass cls, const std::string& what)
        : std::runtime_error(std::string(kind) + ": " + what), kind_(kind), cls_(cls) {}
    const char* kind() const noexcept { return kind_; }
    ErrorClass error_class() const noexcept { return cls_; }

private:
    const char* kind_;
    ErrorClass cls_;
};

#define CMQ_ERROR(Name, Cls)                                                   \
    struct Name : Error {                                                      \
        explicit Name(const std::string& w = "") : Error(#Name, Cls, w) {}     \
    };

CMQ_ERROR(SingularMatrix, ErrorClass::precision)
CMQ_ERROR(NotSquarefree, ErrorClass::input)
CMQ_ERROR(NotPositiveDefinite, ErrorClass::input)
CMQ_ERROR(PrecisionExhausted, ErrorClass::precision)
CMQ_ERROR(NotPrincipal, ErrorClass::unsupported)
CMQ_ERROR(NotPositive, ErrorClass::input)
CMQ_ERROR(NotReduced, ErrorClass::input)
CMQ_ERROR(AmbiguousSign, ErrorClass::precision)
CMQ_ERROR(NoConvergence, ErrorClass::precision)
CMQ_ERROR(DegenerateThetas, ErrorClass::unsupported)
CMQ_ERROR(SingularSystem, ErrorClass::precision)
CMQ_ERROR(LeadingInvariantZero, ErrorClass::unsupported)
CMQ_ERROR(Unstable, ErrorClass::precision)
CMQ_ERROR(UnsupportedClassNumber, ErrorClass::unsupported)
CMQ_ERROR(NoneFound, ErrorClass::unsupported)
CMQ_ERROR(NotIntegral, ErrorClass::precision)
CMQ_ERROR(Ramified, ErrorClass::input)
CMQ_ERROR(NotPrime, ErrorClass::input)
CMQ_ERROR(SingularCurve, ErrorClass::unsupported)
CMQ_ERROR(BadInput, ErrorClass::input)

#undef CMQ_ERROR

}  // namespace cmq
