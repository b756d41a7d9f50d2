#ifndef STTL_ERROR_HPP
#define STTL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sttl {

// Maps 1:1 onto the CLI exit-code contract and the C API status codes.
enum class errc {
  ok = 0,
  rejected = 1,   // pipeline ran but produced no valid certificate
  invalid = 2,    // bad input, failed validation, violated precondition
  integrity = 3,  // stored artifact disagrees with recomputation
  internal = 4,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) {
  throw error(errc::invalid, msg);
}
[[noreturn]] inline void fail_integrity(const std::string& msg) {
  throw error(errc::integrity, msg);
}

}  // namespace sttl

#endif
