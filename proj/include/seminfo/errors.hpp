#pragma once

#include <stdexcept>
#include <string>

namespace seminfo {

// Error categories map onto the CLI exit codes: parse -> 2, validation -> 3,
// non_convergence -> 4 (success is 0).
enum class ErrorKind {
    parse,
    validation,
    non_convergence,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
            case ErrorKind::parse: return 2;
            case ErrorKind::validation: return 3;
            case ErrorKind::non_convergence: return 4;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_validation(const std::string& message) {
    throw Error(ErrorKind::validation, message);
}

[[noreturn]] inline void throw_parse(const std::string& message) {
    throw Error(ErrorKind::parse, message);
}

}  // namespace seminfo
