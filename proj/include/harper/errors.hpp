#pragma once

#include <stdexcept>
#include <string>

namespace harper {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

// grid too coarse or bands touching in the lattice Chern computation
struct RefinementError : Error {
    using Error::Error;
};

// phase accumulation through a site with vanishing amplitude
struct PathError : Error {
    using Error::Error;
};

struct FitError : Error {
    using Error::Error;
};

struct SamplingError : Error {
    using Error::Error;
};

}  // namespace harper
