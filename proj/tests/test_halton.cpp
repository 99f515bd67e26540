#include "doctest.h"

#include <set>

#include "slads/error.hpp"
#include "slads/halton.hpp"

using namespace slads;

TEST_CASE("radical inverse digit mirroring in bases 2 and 3") {
    CHECK(radical_inverse(2, 1) == 0.5);
    CHECK(radical_inverse(2, 2) == 0.25);
    CHECK(radical_inverse(2, 3) == 0.75);
    CHECK(radical_inverse(2, 4) == 0.125);
    CHECK(radical_inverse(3, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(radical_inverse(3, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(radical_inverse(3, 3) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(radical_inverse(3, 5) == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("radical inverse stays in the unit interval") {
    for (int base : {2, 3, 5}) {
        for (long long n = 1; n <= 500; ++n) {
            const double v = radical_inverse(base, n);
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("the first grid point on 128x128") {
    const std::vector<PixelLocation> pts = low_discrepancy_pattern(128, 128, 1);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0] == PixelLocation{64, 42});
}

TEST_CASE("patterns are nested and duplicate-free") {
    const std::vector<PixelLocation> small = low_discrepancy_pattern(64, 64, 40);
    const std::vector<PixelLocation> big = low_discrepancy_pattern(64, 64, 400);
    REQUIRE(small.size() == 40);
    REQUIRE(big.size() == 400);
    for (size_t i = 0; i < small.size(); ++i) CHECK(big[i] == small[i]);
    std::set<std::pair<int, int>> seen;
    for (PixelLocation p : big) {
        CHECK(p.row >= 0);
        CHECK(p.row < 64);
        CHECK(p.col >= 0);
        CHECK(p.col < 64);
        seen.emplace(p.row, p.col);
    }
    CHECK(seen.size() == big.size());
}

TEST_CASE("tiny grids still reach the requested count") {
    const std::vector<PixelLocation> all = low_discrepancy_pattern(2, 2, 4);
    REQUIRE(all.size() == 4);
    std::set<std::pair<int, int>> seen;
    for (PixelLocation p : all) seen.emplace(p.row, p.col);
    CHECK(seen.size() == 4);
}

TEST_CASE("the pattern rejects impossible requests") {
    CHECK_THROWS_AS(low_discrepancy_pattern(4, 4, 17), ContractError);
    CHECK_THROWS_AS(low_discrepancy_pattern(4, 4, -1), ContractError);
    CHECK_THROWS_AS(low_discrepancy_pattern(0, 4, 1), ContractError);
    CHECK_THROWS_AS(radical_inverse(1, 1), ContractError);
    CHECK_THROWS_AS(radical_inverse(2, -1), ContractError);
}

TEST_CASE("degenerate but legal requests") {
    CHECK(low_discrepancy_pattern(4, 4, 0).empty());
    CHECK(radical_inverse(2, 0) == 0.0);
}

TEST_CASE("mid-size patterns spread across the whole grid") {
    // Every quadrant of a 32x32 grid gets its share of a 64-point pattern.
    const std::vector<PixelLocation> pts = low_discrepancy_pattern(32, 32, 64);
    int quadrant[4] = {0, 0, 0, 0};
    for (PixelLocation p : pts)
        ++quadrant[(p.row < 16 ? 0 : 2) + (p.col < 16 ? 0 : 1)];
    for (int q : quadrant) CHECK(q >= 8);
}
