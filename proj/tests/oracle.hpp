#pragma once
// Brute-force reference implementations used only by the tests. They share
// no code with the library beyond plain integer types.

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 md(i64 a, u64 p) {
    i64 r = a % (i64)p;
    return (u64)(r < 0 ? r + (i64)p : r);
}

inline bool prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<u64> primes(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 n = lo; n <= hi; ++n)
        if (prime(n)) out.push_back(n);
    return out;
}

inline u64 inv(u64 a, u64 p) {
    u64 r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

// discriminant test straight from 4a^3 + 27b^2 mod p
inline bool singular(u64 a, u64 b, u64 p) { return (4 * (a * a % p) % p * a + 27 * (b * b % p)) % p == 0; }

// p + 1 - #E(F_p) by counting solutions of y^2 = x^3 + a x + b
inline i64 trace(u64 a, u64 b, u64 p) {
    u64 pts = 1;
    for (u64 x = 0; x < p; ++x) {
        u64 rhs = (x * x % p * x + a * x + b) % p;
        for (u64 y = 0; y < p; ++y)
            if (y * y % p == rhs) ++pts;
    }
    return (i64)(p + 1) - (i64)pts;
}

// 12 H(n): every reduced form of discriminant -n, weights 12, 6 for (a,0,a), 4 for (a,a,a)
inline u64 h12(u64 n) {
    if (n == 0 || n % 4 == 1 || n % 4 == 2) return 0;
    u64 s = 0;
    for (i64 a = 1; 3 * a * a <= (i64)n; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 m = (i64)n + b * b;
            if (m % (4 * a)) continue;
            i64 c = m / (4 * a);
            if (c < a || (c == a && b < 0)) continue;
            s += (a == b && b == c) ? 4 : (b == 0 && a == c) ? 6 : 12;
        }
    return s;
}

// primitive reduced forms of discriminant d < 0
inline u64 class_number(i64 d) {
    u64 h = 0;
    for (i64 a = 1; 3 * a * a <= -d; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 m = b * b - d;
            if (m % (4 * a)) continue;
            i64 c = m / (4 * a);
            if (c < a || (c == a && b < 0)) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) == 1) ++h;
        }
    return h;
}

inline i64 eval(const std::vector<i64>& c, i64 w, u64 p) {
    u64 r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = (r * md(w, p) + md(c[i], p)) % p;
    return (i64)r;
}

}  // namespace oracle
