#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mailscope {

// A normalized mailbox address. Identity is the canonical form only; the
// display name is presentation data.
class Address {
 public:
  Address() = default;

  const std::string& canonical() const noexcept { return canonical_; }
  const std::optional<std::string>& display_name() const noexcept { return display_name_; }

  friend bool operator==(const Address& a, const Address& b) noexcept { return a.canonical_ == b.canonical_; }
  friend std::strong_ordering operator<=>(const Address& a, const Address& b) noexcept {
    return a.canonical_ <=> b.canonical_;
  }

  // Rebuilds an address from its stored parts; the canonical form must
  // already be normalized. Throws Error(InvalidAddress) otherwise.
  static Address from_parts(std::string canonical, std::optional<std::string> display_name);

  friend Address normalize_address(std::string_view raw);

 private:
  Address(std::string canonical, std::optional<std::string> display_name)
      : canonical_(std::move(canonical)), display_name_(std::move(display_name)) {}

  std::string canonical_;
  std::optional<std::string> display_name_;
};

// Extracts the addr-spec from "Name <local@domain>", "local@domain (Name)"
// or a bare address and case-folds it. Throws Error(InvalidAddress).
Address normalize_address(std::string_view raw);

bool is_valid_canonical(std::string_view canonical) noexcept;

struct AddressList {
  std::vector<Address> addresses;
  std::size_t invalid = 0;
};

// Splits a header value such as "a@x.com, \"Doe, J\" <j@y.org>" on commas
// outside quotes/brackets. Group syntax ("team: a@x, b@y;") is flattened.
// Separators ';' are accepted as well since tabular exports use them.
AddressList parse_address_list(std::string_view header_value);

}  // namespace mailscope
