#ifndef TREEDECAY_ERRORS_HPP_
#define TREEDECAY_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace treedecay {

// Raised when an exhaustive computation would exceed its configured budget.
// `required()` reports how many states the request would have needed.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t required)
      : std::runtime_error(what + " (requires " + std::to_string(required) + ")"),
        required_(required) {}

  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

}  // namespace treedecay

#endif  // TREEDECAY_ERRORS_HPP_
