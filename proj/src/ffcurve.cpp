#include "frobstat/ffcurve.hpp"

#include <algorithm>

#include "frobstat/families.hpp"

namespace frobstat {

int kronecker(i64 a_in, i64 n_in) {
    i128 a = a_in, n = n_in;
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -1;
    }
    unsigned v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v > 0) {
        if ((a & 1) == 0) return 0;
        int r8 = (int)(((a % 8) + 8) % 8);
        if ((v & 1) && (r8 == 3 || r8 == 5)) result = -result;
    }
    // Jacobi symbol for odd n
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            int r8 = (int)(n % 8);
            if (r8 == 3 || r8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

bool is_singular(u64 a, u64 b, u64 p) {
    u64 a3 = mulmod(mulmod(a, a, p), a, p);
    u64 d = (mulmod(4 % p, a3, p) + mulmod(27 % p, mulmod(b, b, p), p)) % p;
    return mulmod(16 % p, d, p) == 0;
}

trace_context::trace_context(u64 p) : p_(p), chi_(p, -1), cube_(p) {
    if (p < 3 || !is_prime(p)) throw error(errc::domain, "trace context needs an odd prime");
    chi_[0] = 0;
    for (u64 x = 1; x <= p / 2; ++x) chi_[mulmod(x, x, p)] = 1;
    for (u64 x = 0; x < p; ++x) cube_[x] = mulmod(mulmod(x, x, p), x, p);
}

i64 trace_context::trace(u64 a, u64 b) const {
    i64 s = 0;
    u64 ax = 0;  // a*x mod p, advanced incrementally
    for (u64 x = 0; x < p_; ++x) {
        u64 v = cube_[x] + ax + b;
        v %= p_;
        s += chi_[v];
        ax += a;
        if (ax >= p_) ax -= p_;
    }
    return -s;
}

i64 curve_trace(i64 a, i64 b, u64 p) {
    if (p < 5 || !is_prime(p)) throw error(errc::domain, "curve_trace needs a prime p >= 5");
    u64 am = mod_signed(a, p), bm = mod_signed(b, p);
    if (is_singular(am, bm, p)) throw error(errc::singular, "curve is singular mod p");
    trace_context ctx(p);
    return ctx.trace(am, bm);
}

std::vector<trace_entry> trace_table(const curve_family& fam, const trace_context& ctx,
                                     const std::vector<char>& mask) {
    u64 p = ctx.prime();
    auto fm = fam.f_mod(p), gm = fam.g_mod(p);
    std::vector<trace_entry> out(p);
    for (u64 w = 0; w < p; ++w) {
        if (!mask.empty() && !mask[w]) continue;
        u64 a = eval_mod(fm, w, p), b = eval_mod(gm, w, p);
        if (is_singular(a, b, p)) {
            out[w].singular = true;
            continue;
        }
        out[w].trace = ctx.trace(a, b);
    }
    return out;
}

std::vector<trace_entry> trace_table(const curve_family& fam, u64 p) {
    if (p < 5 || !is_prime(p)) throw error(errc::domain, "trace_table needs a prime p >= 5");
    trace_context ctx(p);
    return trace_table(fam, ctx, {});
}

const std::vector<i64>& cm_j_invariants() {
    // class number one orders: D = -3, -12, -27, -4, -16, -7, -28, -8, -11,
    // -19, -43, -67, -163 (Cox, "Primes of the form x^2+ny^2", Thm 7.30 list)
    static const std::vector<i64> js = {
        0, 54000, -12288000, 1728, 287496, -3375, 16581375, 8000, -32768,
        -884736, -884736000, -147197952000, -262537412640768000,
    };
    return js;
}

bool is_cm_j(const rational& j) {
    if (denominator(j) != 1) return false;
    const bigint& n = numerator(j);
    for (i64 v : cm_j_invariants())
        if (n == v) return true;
    return false;
}

}  // namespace frobstat
