#include "dns/name.hpp"

#include <cctype>
#include <stdexcept>

namespace botsim {

DomainName DomainName::parse(std::string_view text) {
  if (text.empty() || text.size() > 253) {
    throw std::invalid_argument("malformed domain name: bad length");
  }
  if (text.back() == '.') text.remove_suffix(1);  // absolute-name dot
  DomainName name;
  std::string label;
  auto flush = [&] {
    if (label.empty() || label.size() > 63) {
      throw std::invalid_argument("malformed domain name: bad label");
    }
    name.labels.push_back(label);
    label.clear();
  };
  for (char c : text) {
    if (c == '.') {
      flush();
      continue;
    }
    unsigned char uc = static_cast<unsigned char>(c);
    if (!std::isalnum(uc) && c != '-' && c != '_') {
      throw std::invalid_argument("malformed domain name: bad character");
    }
    label.push_back(static_cast<char>(std::tolower(uc)));
  }
  flush();
  return name;
}

std::string DomainName::render() const {
  std::string out;
  for (const std::string& l : labels) {
    if (!out.empty()) out.push_back('.');
    out += l;
  }
  return out;
}

bool DomainName::ends_with(const DomainName& suffix) const {
  if (suffix.labels.size() > labels.size()) return false;
  auto mine = labels.rbegin();
  for (auto it = suffix.labels.rbegin(); it != suffix.labels.rend();
       ++it, ++mine) {
    if (*it != *mine) return false;
  }
  return true;
}

}  // namespace botsim
