#include "frobstat/classnum.hpp"

#include <fstream>
#include <numeric>

#include "frobstat/ffcurve.hpp"
#include "frobstat/parallel.hpp"

namespace frobstat {

class_number_result class_number(i64 d) {
    if (d >= 0) throw error(errc::domain, "class_number needs a negative discriminant");
    i64 r4 = ((d % 4) + 4) % 4;
    if (r4 != 0 && r4 != 1) throw error(errc::domain, "discriminant must be 0 or 1 mod 4");
    u64 D = (u64)(-d);
    class_number_result out;
    out.w = D == 3 ? 3 : D == 4 ? 2 : 1;
    for (u64 b = D & 1; 3 * b * b <= D; b += 2) {
        u64 ac = (b * b + D) / 4;
        for (u64 a = std::max<u64>(b, 1); a * a <= ac; ++a) {
            if (ac % a) continue;
            u64 c = ac / a;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            out.h += (b == 0 || a == b || a == c) ? 1 : 2;
        }
    }
    return out;
}

u64 hurwitz12(u64 n) {
    if (n == 0 || n % 4 == 1 || n % 4 == 2) return 0;
    u64 total = 0;
    for (u64 f = 1; f * f <= n; ++f) {
        if (n % (f * f)) continue;
        u64 m = n / (f * f);
        if (m % 4 != 0 && m % 4 != 3) continue;
        auto cn = class_number(-(i64)m);
        total += cn.h * (12 / cn.w);
    }
    return total;
}

hurwitz_table hurwitz_table::build(u64 N, u64 cap) {
    if (N > cap) throw error(errc::cap, "Hurwitz table bound exceeds the memory cap");
    hurwitz_table t;
    t.N_ = N;
    t.v_.assign(N + 1, 0);
    u64 amax = 0;
    while (3 * (amax + 1) * (amax + 1) <= N) ++amax;
    unsigned nt = std::min<u64>(thread_count(), std::max<u64>(amax, 1));
    // a-values are dealt round-robin to a fixed number of partial tables; the
    // merge is an exact integer sum so the result does not depend on nt
    std::vector<std::vector<u64>> part(nt > 1 ? nt : 0);
    for (auto& pv : part) pv.assign(N + 1, 0);
    parallel_for(nt, [&](std::size_t k) {
        std::vector<u64>& out = nt > 1 ? part[k] : t.v_;
        for (u64 a = 1 + k; a <= amax; a += nt) {
            for (i64 b = -(i64)a + 1; b <= (i64)a; ++b) {
                u64 bb = (u64)(b * b);
                u64 c = b < 0 ? a + 1 : a;
                u64 n = 4 * a * c - bb;
                u64 step = 4 * a;
                if (n > N) continue;
                // the first c may carry a reduced weight
                if (c == a && b == 0)
                    out[n] += 6;
                else if (c == a && b == (i64)a)
                    out[n] += 4;
                else
                    out[n] += 12;
                for (n += step; n <= N; n += step) out[n] += 12;
            }
        }
    });
    for (auto& pv : part)
        for (u64 n = 0; n <= N; ++n) t.v_[n] += pv[n];
    return t;
}

u64 hurwitz_table::value12(u64 n) const {
    if (n > N_) throw error(errc::cache, "Hurwitz table too small for n = " + std::to_string(n));
    return v_[n];
}

void hurwitz_table::save(const std::string& path) const {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw error(errc::io, "cannot write Hurwitz cache " + path);
        out << magic << '\n' << N_ << '\n';
        for (u64 x : v_) out << x << '\n';
        if (!out) throw error(errc::io, "failed writing Hurwitz cache " + path);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw error(errc::io, "cannot move Hurwitz cache into " + path);
}

std::optional<hurwitz_table> hurwitz_table::load(const std::string& path, u64 min_N) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string m;
    if (!std::getline(in, m) || m != magic) return std::nullopt;
    u64 N = 0;
    if (!(in >> N) || N < min_N) return std::nullopt;
    hurwitz_table t;
    t.N_ = N;
    t.v_.assign(N + 1, 0);
    for (u64 n = 0; n <= N; ++n) {
        if (!(in >> t.v_[n])) return std::nullopt;
        if (n % 4 == 1 || n % 4 == 2) {
            if (t.v_[n] != 0) return std::nullopt;
        }
    }
    u64 extra;
    if (in >> extra) return std::nullopt;
    return t;
}

hurwitz_table hurwitz_table::load_or_build(const std::string& path, u64 N, u64 cap) {
    if (auto t = load(path, N)) return std::move(*t);
    hurwitz_table t = build(N, cap);
    t.save(path);
    return t;
}

std::vector<u64> trace_histogram(u64 p) {
    if (p < 5 || !is_prime(p)) throw error(errc::domain, "trace histogram needs a prime p >= 5");
    u64 B = isqrt(4 * p);
    std::vector<u64> hist(2 * B + 1, 0);
    trace_context ctx(p);
    for (u64 a = 0; a < p; ++a)
        for (u64 b = 0; b < p; ++b) {
            if (is_singular(a, b, p)) continue;
            hist[(u64)(ctx.trace(a, b) + (i64)B)] += 1;
        }
    return hist;
}

deuring_result deuring_check(u64 p, i64 tau) {
    if (p < 5 || !is_prime(p)) throw error(errc::precondition, "deuring_check needs a prime p >= 5");
    if (tau == 0 || (u128)((i128)tau * tau) >= 4 * (u128)p)
        throw error(errc::precondition, "deuring_check needs 0 < |tau| < 2 sqrt(p)");
    if (tau % (i64)p == 0) throw error(errc::precondition, "deuring_check needs p not dividing tau");
    auto hist = trace_histogram(p);
    u64 B = isqrt(4 * p);
    deuring_result r;
    r.lhs = hist[(u64)(tau + (i64)B)];
    u64 h12 = hurwitz12(4 * p - (u64)(tau * tau));
    r.rhs = rational(bigint(p - 1) * h12, 24);
    r.holds = rational(r.lhs) == r.rhs;
    return r;
}

}  // namespace frobstat
