#pragma once

#include <stdexcept>
#include <string>

namespace fraxdim {

// Every failure carries a short machine-readable kind (e.g. "FieldMismatch")
// next to the human message, so the CLI can name the violation it reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

}  // namespace fraxdim
