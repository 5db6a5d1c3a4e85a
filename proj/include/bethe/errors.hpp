#pragma once

#include <stdexcept>
#include <string>

namespace bethe {

// Base class for all library errors so callers can catch everything at once.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structure function or derived expression was evaluated at a pole.
struct Singular : Error {
    Singular(std::string kind_, std::string x_, std::string y_)
        : Error("singular evaluation of " + kind_ + " at (" + x_ + ", " + y_ + ")"),
          kind(std::move(kind_)), x(std::move(x_)), y(std::move(y_)) {}
    std::string kind;
    std::string x;
    std::string y;
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

struct SectorMismatch : Error {
    explicit SectorMismatch(const std::string& msg) : Error(msg) {}
};

struct NoVacuumFound : Error {
    explicit NoVacuumFound(const std::string& msg) : Error(msg) {}
};

struct DepthExceeded : Error {
    explicit DepthExceeded(const std::string& msg) : Error(msg) {}
};

struct DimensionTooLarge : Error {
    explicit DimensionTooLarge(const std::string& msg) : Error(msg) {}
};

struct RapidityClash : Error {
    explicit RapidityClash(const std::string& msg) : Error(msg) {}
};

struct PoleProximity : Error {
    explicit PoleProximity(const std::string& msg) : Error(msg) {}
};

struct ZeroVector : Error {
    explicit ZeroVector(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace bethe
