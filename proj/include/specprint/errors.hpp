#pragma once

#include <stdexcept>
#include <string>

namespace specprint {

// Error taxonomy shared across the library. Each type carries the condition
// name in what() so CLI diagnostics stay greppable.
struct Error : std::runtime_error {
    Error(const std::string& name, const std::string& msg)
        : std::runtime_error(name + ": " + msg) {}
};

#define SPECPRINT_ERROR_TYPE(Name)                                        \
    struct Name : Error {                                                 \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}      \
    }

SPECPRINT_ERROR_TYPE(IoError);
SPECPRINT_ERROR_TYPE(FormatError);
SPECPRINT_ERROR_TYPE(DegenerateImage);
SPECPRINT_ERROR_TYPE(EmptySet);
SPECPRINT_ERROR_TYPE(DuplicateStem);
SPECPRINT_ERROR_TYPE(NoPairs);
SPECPRINT_ERROR_TYPE(ShapeMismatch);
SPECPRINT_ERROR_TYPE(TooSmall);
SPECPRINT_ERROR_TYPE(EmptyInput);
SPECPRINT_ERROR_TYPE(AlreadyCentered);
SPECPRINT_ERROR_TYPE(BadSide);
SPECPRINT_ERROR_TYPE(DegenerateAutocorr);

#undef SPECPRINT_ERROR_TYPE

}  // namespace specprint
