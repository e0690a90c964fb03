#include "coalsim/combinatorics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace coalsim {

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (unsigned j = 1; j <= k; ++j) {
        r *= n - k + j;
        r /= j;
    }
    return r;
}

BigInt merge_count(unsigned m, unsigned q) {
    if (q < 2) throw std::invalid_argument("merge_count: q must be >= 2");
    BigInt d = 0;
    for (unsigned j = 2; j <= std::min(q, m); ++j) d += binomial(m, j);
    return d;
}

BigInt stirling2(unsigned n, unsigned k) {
    if (k > n) return 0;  // same convention as binomial
    if (k == 0) return n == 0 ? 1 : 0;
    // row-wise recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1)
    std::vector<BigInt> row(k + 1, 0);
    row[0] = 1;  // S(0,0)
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned j = std::min(i, k); j >= 1; --j)
            row[j] = BigInt(j) * row[j] + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

BigInt bell(unsigned n) {
    BigInt b = 0;
    for (unsigned k = 0; k <= n; ++k) b += stirling2(n, k);
    return b;
}

BigInt split_count(unsigned n, unsigned q) {
    if (n < 1 || q < 2) throw std::invalid_argument("split_count: needs n >= 1, q >= 2");
    BigInt t = 0;
    for (unsigned k = 2; k <= std::min(q, n); ++k) t += stirling2(n, k);
    return t;
}

BigInt worst_case_iters(unsigned K, unsigned q) {
    if (K < 2 || q < 2) throw std::invalid_argument("worst_case_iters: needs K >= 2, q >= 2");
    BigInt w = 0;
    for (unsigned i = 0; i + 2 <= K; ++i) w += merge_count(K - i, q);
    return w;
}

std::vector<CountRow> count_table(const std::vector<unsigned>& Ks,
                                  const std::vector<unsigned>& qs) {
    std::vector<CountRow> rows;
    for (unsigned K : Ks) {
        for (unsigned q : qs) {
            CountRow r;
            r.K = K;
            r.q = q;
            r.D = merge_count(K, q);
            r.T = split_count(K, q);
            r.W = worst_case_iters(K, q);
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

std::string count_table_csv(const std::vector<CountRow>& rows) {
    std::ostringstream out;
    out << "K,q,D,T,W\n";
    for (const auto& r : rows)
        out << r.K << ',' << r.q << ',' << r.D << ',' << r.T << ',' << r.W << '\n';
    return out.str();
}

}  // namespace coalsim
