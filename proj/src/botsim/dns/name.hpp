#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace botsim {

// Case-normalized domain name, most-specific label first
// ({"www", "amazon", "com"}). Rendered length is capped at 253 characters.
struct DomainName {
  std::vector<std::string> labels;

  // Throws std::invalid_argument on malformed input (empty labels, bad
  // characters, oversized name).
  static DomainName parse(std::string_view text);

  std::string render() const;
  bool ends_with(const DomainName& suffix) const;

  bool operator==(const DomainName& other) const = default;
};

}  // namespace botsim
