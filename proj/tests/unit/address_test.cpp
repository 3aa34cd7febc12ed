#include <gtest/gtest.h>

#include "mailscope/address.hpp"
#include "mailscope/error.hpp"

namespace mailscope {
namespace {

TEST(NormalizeAddress, DisplayNameAndCase) {
  const Address a = normalize_address("Shivani <SHIVANI@Gmail.com>");
  EXPECT_EQ(a.canonical(), "shivani@gmail.com");
  EXPECT_EQ(a.display_name(), "Shivani");
}

TEST(NormalizeAddress, Bare) {
  const Address a = normalize_address("a@b.com");
  EXPECT_EQ(a.canonical(), "a@b.com");
  EXPECT_FALSE(a.display_name().has_value());
}

TEST(NormalizeAddress, CommentAndQuotedName) {
  EXPECT_EQ(normalize_address("j@y.org (Jane Doe)").canonical(), "j@y.org");
  const Address q = normalize_address("\"Doe, Jane\" <J@Y.org>");
  EXPECT_EQ(q.canonical(), "j@y.org");
  EXPECT_EQ(q.display_name(), "Doe, Jane");
}

TEST(NormalizeAddress, Invalid) {
  EXPECT_THROW(normalize_address("no-at-sign"), Error);
  EXPECT_THROW(normalize_address("a@@b"), Error);
  EXPECT_THROW(normalize_address("@b.com"), Error);
  EXPECT_THROW(normalize_address("a@"), Error);
  EXPECT_THROW(normalize_address(""), Error);
  try {
    normalize_address("no-at-sign");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidAddress);
  }
}

TEST(NormalizeAddress, IdentityIgnoresDisplayName) {
  EXPECT_EQ(normalize_address("A <x@y.com>"), normalize_address("B <X@Y.COM>"));
}

TEST(AddressList, SplitsOutsideQuotes) {
  const auto list = parse_address_list("a@x.com, \"Doe, J\" <j@y.org>; bad, team: c@z.net, d@z.net;");
  ASSERT_EQ(list.addresses.size(), 4u);
  EXPECT_EQ(list.addresses[1].canonical(), "j@y.org");
  EXPECT_EQ(list.addresses[3].canonical(), "d@z.net");
  EXPECT_EQ(list.invalid, 1u);
}

TEST(Address, FromPartsRequiresCanonical) {
  EXPECT_EQ(Address::from_parts("a@b.com", std::nullopt).canonical(), "a@b.com");
  EXPECT_THROW(Address::from_parts("A@b.com", std::nullopt), Error);
}

}  // namespace
}  // namespace mailscope
