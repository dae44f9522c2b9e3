#pragma once

#include <stdexcept>
#include <string>

namespace deltapi {

// Base class for all kernel errors. `code` is a stable machine-readable
// identifier (used verbatim in CLI error objects), `module` names the
// subsystem that raised it.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string module, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), module_(std::move(module)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

private:
    std::string code_;
    std::string module_;
};

#define DELTAPI_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                                 \
    public:                                                                     \
        Name(std::string module, const std::string& message)                    \
            : Error(#Name, std::move(module), message) {}                       \
    }

DELTAPI_DEFINE_ERROR(InvalidCtx);
DELTAPI_DEFINE_ERROR(NonDivisible);
DELTAPI_DEFINE_ERROR(DivisionByZero);
DELTAPI_DEFINE_ERROR(NotAUnit);
DELTAPI_DEFINE_ERROR(OrderOverflow);
DELTAPI_DEFINE_ERROR(PrecisionExhausted);
DELTAPI_DEFINE_ERROR(OutOfDomain);
DELTAPI_DEFINE_ERROR(BadReduction);
DELTAPI_DEFINE_ERROR(DegenerateWeight);
DELTAPI_DEFINE_ERROR(NotEtale);
DELTAPI_DEFINE_ERROR(InsufficientCoefficients);
DELTAPI_DEFINE_ERROR(DenominatorNotUnit);
DELTAPI_DEFINE_ERROR(Usage);

#undef DELTAPI_DEFINE_ERROR

} // namespace deltapi
