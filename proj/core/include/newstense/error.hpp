#pragma once

#include <stdexcept>
#include <string>

namespace newstense {

// Library errors deliberately share one type: callers either recover
// (CLI prints the message, exits 2) or they don't care which stage threw.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace newstense
