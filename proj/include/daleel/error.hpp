#pragma once

#include <stdexcept>
#include <string>

namespace daleel {

/// Failure raised by any module; the message is "<module>: <cause>".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& cause)
        : std::runtime_error(module + ": " + cause), module_(std::move(module)) {}

    const std::string& module_name() const { return module_; }

private:
    std::string module_;
};

} // namespace daleel
