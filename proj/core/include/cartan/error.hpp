#pragma once

#include <stdexcept>
#include <string>

namespace cartan {

/// Raised for malformed inputs and violated preconditions.
///
/// `where` optionally carries a JSON pointer (e.g. "/arrows/3/src") so that
/// front ends can point at the offending part of a document.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string where = {})
      : std::runtime_error(what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace cartan
