#ifndef DDLAB_ERRORS_HPP
#define DDLAB_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddlab
{

// Base class for every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public error
{
public:
    parse_error(const std::string &msg, std::size_t pos)
        : error("parse error at position " + std::to_string(pos) + ": " + msg), position_(pos)
    {
    }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class context_mismatch : public error
{
public:
    using error::error;
};

// Raised when a Groebner computation exceeds its reduction budget.
class budget_exceeded : public error
{
public:
    using error::error;
};

class unsupported : public error
{
public:
    using error::error;
};

class invalid_presentation : public error
{
public:
    using error::error;
};

class overflow_error : public error
{
public:
    using error::error;
};

// A division that was expected to be exact left a remainder.
class divisibility_error : public error
{
public:
    using error::error;
};

} // namespace ddlab

#endif
