#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace spdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WavelengthOutOfRange : public Error {
public:
    using Error::Error;
};

/// Transverse momentum larger than the medium wave number.
class BeyondCone : public Error {
public:
    using Error::Error;
};

class AllZeroGrid : public Error {
public:
    using Error::Error;
};

class KernelUnderresolved : public Error {
public:
    using Error::Error;
};

/// Fit objective is flat across the search interval.
class NoDescent : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, int line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& key, const std::string& what)
        : Error(key + ": " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

using WarningSink = std::function<void(const std::string&)>;

/// Replaces the warning sink (default: stderr). Returns the previous one.
WarningSink set_warning_sink(WarningSink sink);

void warn(const std::string& message);

/// Emits `message` only the first time `key` is seen in this process.
void warn_once(const std::string& key, const std::string& message);

} // namespace spdc
