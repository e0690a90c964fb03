#include <doctest.h>

#include <cstdint>
#include <functional>
#include <vector>

#include "coalsim/combinatorics.hpp"

using namespace coalsim;

namespace {

// brute-force count of subsets of an m-set with size in [2, q]
std::uint64_t merge_count_brute(unsigned m, unsigned q) {
    std::uint64_t count = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        unsigned size = static_cast<unsigned>(__builtin_popcount(mask));
        if (size >= 2 && size <= q) ++count;
    }
    return count;
}

// brute-force count of partitions of an n-set with at most q blocks,
// block count at least 2 (resp. the number with exactly k blocks)
void enumerate_partitions(unsigned n, const std::function<void(unsigned)>& visit) {
    std::vector<unsigned> block(n, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned idx, unsigned used) {
        if (idx == n) {
            visit(used);
            return;
        }
        for (unsigned b = 0; b <= used; ++b) {
            block[idx] = b;
            rec(idx + 1, b == used ? used + 1 : used);
        }
    };
    rec(0, 0);
}

}  // namespace

TEST_CASE("binomial") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(8, 3) == 56);
    CHECK(binomial(4, 7) == 0);
    CHECK(binomial(52, 26) == BigInt("495918532948104"));
}

TEST_CASE("merge_count matches subset enumeration") {
    CHECK(merge_count(8, 2) == 28);
    CHECK(merge_count(8, 8) == 247);  // 2^8 - 8 - 1
    CHECK(merge_count(5, 3) == 20);
    for (unsigned m = 2; m <= 10; ++m)
        for (unsigned q = 2; q <= m + 1; ++q)
            CHECK(merge_count(m, q) == merge_count_brute(m, q));
    // q beyond m saturates
    CHECK(merge_count(6, 100) == merge_count(6, 6));
}

TEST_CASE("stirling2 matches partition enumeration") {
    CHECK(stirling2(3, 2) == 3);
    CHECK(stirling2(4, 2) == 7);
    CHECK(stirling2(8, 4) == 1701);
    CHECK(stirling2(5, 0) == 0);
    CHECK(stirling2(0, 0) == 1);
    CHECK(stirling2(3, 5) == 0);

    for (unsigned n = 1; n <= 8; ++n) {
        std::vector<std::uint64_t> by_blocks(n + 1, 0);
        enumerate_partitions(n, [&](unsigned k) { ++by_blocks[k]; });
        for (unsigned k = 1; k <= n; ++k) CHECK(stirling2(n, k) == by_blocks[k]);
    }
}

TEST_CASE("bell is the row sum of stirling2") {
    CHECK(bell(0) == 1);
    CHECK(bell(3) == 5);
    CHECK(bell(8) == 4140);
    for (unsigned n = 0; n <= 8; ++n) {
        BigInt s = 0;
        for (unsigned k = 0; k <= n; ++k) s += stirling2(n, k);
        CHECK(bell(n) == s);
    }
}

TEST_CASE("split_count") {
    CHECK(split_count(3, 3) == 4);   // partitions of a 3-set into 2 or 3 blocks
    CHECK(split_count(4, 2) == 7);
    CHECK(split_count(8, 8) == bell(8) - 1);  // everything but the one-block partition
    for (unsigned n = 4; n <= 8; ++n)
        for (unsigned q = 3; q <= n; ++q) CHECK(split_count(n, q) >= merge_count(n, q));
}

TEST_CASE("worst_case_iters") {
    CHECK(worst_case_iters(2, 2) == 1);
    // W(8,2) = sum of C(m,2) for m = 2..8
    CHECK(worst_case_iters(8, 2) == 84);
    BigInt manual = 0;
    for (unsigned m = 2; m <= 8; ++m) manual += merge_count(m, 5);
    CHECK(worst_case_iters(8, 5) == manual);

    // pairwise-merge worst case grows like K^3 / 6
    for (unsigned K = 2; K <= 64; ++K) {
        BigInt w = worst_case_iters(K, 2);
        CHECK(w * 6 <= BigInt(K) * K * K);
        if (K >= 4) CHECK(w * 8 >= BigInt(K) * K * K);
    }
}

TEST_CASE("count_table and its CSV rendering") {
    std::vector<CountRow> rows = count_table({4, 8}, {2, 8});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].K == 4);
    CHECK(rows[0].q == 2);
    CHECK(rows[0].D == merge_count(4, 2));
    CHECK(rows[3].K == 8);
    CHECK(rows[3].q == 8);
    CHECK(rows[3].D == 247);
    CHECK(rows[3].T == split_count(8, 8));
    CHECK(rows[3].W == worst_case_iters(8, 8));

    std::string csv = count_table_csv(rows);
    CHECK(csv.find("K,q,D,T,W") == 0);
    CHECK(csv.find("8,8,247,") != std::string::npos);
}
