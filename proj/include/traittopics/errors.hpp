#ifndef TRAITTOPICS_ERRORS_HPP
#define TRAITTOPICS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace traittopics {

// Raised for anything wrong with user-supplied data or configuration:
// malformed corpus lines, bad labels, empty corpora, missing inputs.
// The CLI maps DataError to exit code 2; all other exceptions to 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace traittopics

#endif
