#include "frobstat/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace frobstat {

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 m) {
    i128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        i128 q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (r != 1) throw error(errc::domain, "value is not invertible");
    if (t < 0) t += m;
    return (u64)t;
}

u64 mod_signed(i64 a, u64 m) {
    i128 r = (i128)a % (i128)m;
    if (r < 0) r += m;
    return (u64)r;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 isqrt(u64 n) {
    u64 r = (u64)std::sqrt((long double)n);
    while (r > 0 && (u128)r * r > n) --r;
    while ((u128)(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(u64 n) {
    u64 r = isqrt(n);
    return r * r == n;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    static const u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // these bases are deterministic below 2^64
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

std::vector<u64> primes_up_to(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<char> comp(n + 1, 0);
    for (u64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

namespace {

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 0;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
    if (n == 0) throw error(errc::domain, "cannot factor 0");
    std::vector<u64> ps;
    for (u64 p : {2, 3, 5, 7, 11, 13}) {
        while (n % p == 0) {
            ps.push_back(p);
            n /= p;
        }
    }
    for (u64 p = 17; p * p <= n && p < 4096; p += 2) {
        while (n % p == 0) {
            ps.push_back(p);
            n /= p;
        }
    }
    factor_rec(n, ps);
    std::sort(ps.begin(), ps.end());
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 p : ps) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.push_back({p, 1});
    }
    return out;
}

u64 largest_prime_factor(u64 n) {
    auto f = factorize(n);
    return f.empty() ? 1 : f.back().first;
}

unsigned valuation(u64 n, u64 p) {
    if (n == 0) return 1000;  // stands in for infinity
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

unsigned valuation_signed(i64 n, u64 p) {
    return valuation(n < 0 ? (u64)(-(i128)n) : (u64)n, p);
}

u64 ipow(u64 b, unsigned e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

u64 totient(u64 n) {
    u64 r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

u64 divisor_count(u64 n) {
    u64 r = 1;
    for (auto [p, e] : factorize(n)) r *= e + 1;
    return r;
}

rational sigma_minus1(u64 n) {
    rational r = 1;
    for (auto [p, e] : factorize(n)) {
        rational s = 0, t = 1;
        for (unsigned i = 0; i <= e; ++i) {
            s += t;
            t /= p;
        }
        r *= s;
    }
    return r;
}

u64 kappa(u64 n) {
    u64 r = 1;
    for (auto [p, e] : factorize(n))
        if (e % 2) r *= p;
    return r;
}

u64 sqfree_core(u64 n) {
    u64 r = 1;
    for (auto [p, e] : factorize(n)) r *= p;
    return r;
}

u64 gamma_period(u64 n) {
    u64 s = sqfree_core(n);
    return totient(s * s);
}

}  // namespace frobstat
