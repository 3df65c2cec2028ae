#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace frobstat {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using real = boost::multiprecision::cpp_bin_float_quad;

enum class errc {
    ok = 0,
    domain = 1,
    singular = 2,
    precondition = 3,
    cap = 4,
    parse = 5,
    io = 6,
    missing = 7,
    bad_prime = 8,
    range = 9,
    degenerate = 10,
    cache = 11,
    budget = 12,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }
u64 powmod(u64 a, u64 e, u64 m);
u64 invmod(u64 a, u64 m);  // requires gcd(a,m)=1
u64 mod_signed(i64 a, u64 m);

u64 gcd(u64 a, u64 b);
u64 isqrt(u64 n);
bool is_square(u64 n);
bool is_prime(u64 n);

// primes <= n, ascending
std::vector<u64> primes_up_to(u64 n);

// (prime, exponent) pairs, ascending
std::vector<std::pair<u64, unsigned>> factorize(u64 n);
u64 largest_prime_factor(u64 n);

unsigned valuation(u64 n, u64 p);
unsigned valuation_signed(i64 n, u64 p);
u64 ipow(u64 b, unsigned e);
u64 totient(u64 n);
u64 divisor_count(u64 n);
rational sigma_minus1(u64 n);  // sum of 1/d over d | n
u64 kappa(u64 n);
u64 sqfree_core(u64 n);
u64 gamma_period(u64 n);  // phi(s(n)^2)

}  // namespace frobstat
