#include "doctest.h"

#include "core/error.hpp"
#include "core/smallgroup.hpp"

using namespace fgi;

TEST_CASE("cyclic groups") {
  Group z4 = Group::cyclic(4);
  CHECK(z4.order() == 4);
  CHECK(z4.identity() == 0);
  CHECK(z4.element_order(1) == 4);
  CHECK(z4.is_abelian());
  CHECK(z4.iso_name() == "Z4");
  CHECK(z4.order_multiset() == std::vector<int>{1, 2, 4, 4});
}

TEST_CASE("products and the symmetric group") {
  Group k4 = Group::klein4();
  CHECK(k4.iso_name() == "Z2xZ2");
  CHECK(k4.order_multiset() == std::vector<int>{1, 2, 2, 2});

  Group s3 = Group::symmetric(3);
  CHECK(s3.order() == 6);
  CHECK_FALSE(s3.is_abelian());
  CHECK(s3.is_solvable());
  CHECK(s3.iso_name() == "S3");
  CHECK(s3.derived_subgroup().size() == 3);

  Group z6 = Group::cyclic(6);
  CHECK(z6.iso_name() == "Z6");
  CHECK_FALSE(Group::isomorphism(s3, z6).has_value());
  CHECK(Group::isomorphism(z6, Group::direct_product(Group::cyclic(2), Group::cyclic(3)))
            .has_value());
}

TEST_CASE("subgroup enumeration") {
  Group z4 = Group::cyclic(4);
  CHECK(z4.all_subgroups().size() == 3);  // 1, Z2, Z4

  Group k4 = Group::klein4();
  CHECK(k4.all_subgroups().size() == 5);  // 1, three Z2, K4

  Group s3 = Group::symmetric(3);
  CHECK(s3.all_subgroups().size() == 6);  // 1, three Z2, Z3, S3
}

TEST_CASE("bad tables are rejected") {
  CHECK_THROWS_AS(Group::from_table({{0, 1}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(Group::from_table({{0, 1, 2, 3},
                                     {1, 0, 3, 2},
                                     {2, 3, 1, 0},
                                     {3, 2, 0, 1}}),
                  DomainError);
}
