#pragma once

#include <stdexcept>

namespace signwave {

// Common failure vocabulary shared by all modules.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments or preconditions (empty series, out-of-range parameters, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A frame with no foreground at all.
class EmptyScene : public Error {
public:
    using Error::Error;
};

// Foreground present but too small to carry a usable boundary.
class TooSmall : public Error {
public:
    using Error::Error;
};

// Signature too flat to normalise (near-circular blobs).
class DegenerateShape : public Error {
public:
    using Error::Error;
};

// Rendered figure does not fit the requested frame.
class FrameOverflow : public Error {
public:
    using Error::Error;
};

// File reading/writing/parsing failures.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace signwave
