#pragma once

#include <map>
#include <string>
#include <vector>

#include "frobstat/arith.hpp"
#include "frobstat/poly.hpp"

namespace frobstat {

// binom(m, (m-j)/2) - binom(m, (m-j)/2 - 1) when m = j mod 2, else 0
i64 h_coeff(unsigned m, unsigned j);
double h_coeff_quadrature(unsigned m, unsigned j);

// normalized Hecke recursion: t[0] = 1, t[1] = a_p/sqrt(p), t[j] = t[1] t[j-1] - t[j-2]
std::vector<double> hecke_normalized(i64 ap, u64 p, unsigned jmax);

// (1/s(n)^2) sum over a, b mod s(n) with gcd(Delta, n) = 1 of a_E(n)/sqrt(n)
double S_avg(u64 n, u64 cap = 1'000'000);

// r!/(2^{r/2} (r/2)!) for even r, 0 for odd r
u64 gaussian_moment(unsigned r);

struct coeff_map {
    enum class kind { identity, polynomial, exponential } k = kind::identity;
    poly q;                      // polynomial kind
    i64 alpha = 1, beta = 0, gamma = 1;  // exponential kind: (alpha n + beta) gamma^n
    i64 apply(i64 n) const;
    std::string str() const;
};

struct prime_set {
    enum class kind { all, congruence, list } k = kind::all;
    u64 ups = 0, om = 1;
    std::vector<u64> primes;
    // primes p in P with 5 <= p <= x, ascending
    std::vector<u64> up_to(u64 x) const;
};

struct pair_family_spec {
    coeff_map phi, psi;
    i64 A = 1, B = 1;
    prime_set P;
};

struct moment_report {
    u64 x = 0;
    std::vector<double> V;             // V[r-1] for r = 1..rMax
    std::vector<u64> gaussian_target;  // same indexing
    u64 curves = 0;
    u64 singular = 0;
    u64 pair_count = 0;
    u64 excluded_isomorphic = 0;
    u64 primes = 0;
};

// budget caps the number of ordered pairs times primes
moment_report moments(const pair_family_spec& spec, u64 x, unsigned r_max, double budget = 2e10);
// r_max <= 2 only, via the power-sum expansion
moment_report moments_collapsed(const pair_family_spec& spec, u64 x, unsigned r_max);

struct eigenvalue_table {
    std::vector<std::string> forms;             // in first-seen order
    std::map<std::pair<std::string, u64>, double> lambda;
    static eigenvalue_table from_csv(const std::string& path);
};

moment_report moments_from_eigen_table(const eigenvalue_table& table, const std::vector<u64>& P, u64 x,
                                       unsigned r_max);

// canonical representative of the Q-isomorphism class of y^2 = x^3 + a x + b
std::pair<i64, i64> twist_class_key(i64 a, i64 b);
bool isomorphic_over_q(i64 a, i64 b, i64 a2, i64 b2);

}  // namespace frobstat
