#ifndef COALSIM_COMBINATORICS_HPP
#define COALSIM_COMBINATORICS_HPP

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace coalsim {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(unsigned n, unsigned k);

/// D(m, q) = sum_{j=2}^{min(q,m)} C(m, j): ways to pick 2..q coalitions
/// to merge out of m.
BigInt merge_count(unsigned m, unsigned q);

/// Stirling number of the second kind, via the stable recurrence
/// S(n,k) = k S(n-1,k) + S(n-1,k-1).
BigInt stirling2(unsigned n, unsigned k);

BigInt bell(unsigned n);

/// T(n, q) = sum_{k=2}^{q} S(n, k): ways to split an n-set into 2..q blocks.
BigInt split_count(unsigned n, unsigned q);

/// W(K, q) = sum_{i=0}^{K-2} D(K-i, q): worst-case candidate count of
/// the merge-based formation algorithm.
BigInt worst_case_iters(unsigned K, unsigned q);

struct CountRow {
    unsigned K = 0;
    unsigned q = 0;
    BigInt D, T, W;
};

std::vector<CountRow> count_table(const std::vector<unsigned>& Ks,
                                  const std::vector<unsigned>& qs);
std::string count_table_csv(const std::vector<CountRow>& rows);

}  // namespace coalsim

#endif  // COALSIM_COMBINATORICS_HPP
