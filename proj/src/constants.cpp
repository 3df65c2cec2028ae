#include "frobstat/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frobstat/classnum.hpp"
#include "frobstat/ffcurve.hpp"
#include "frobstat/parallel.hpp"

namespace frobstat {

namespace {

i64 floor_mod(i128 a, i128 m) {
    i128 r = a % m;
    if (r < 0) r += m;
    return (i64)r;
}

u64 gcd_signed(i128 a, u64 m) {
    u64 x = (u64)(a < 0 ? -a : a);
    return std::gcd(x, m);
}

// residues r mod 4m coprime to 4m with gcd(tau^2 - r s^2, 4m) = 4 and
// (tau^2 - r s^2)/4 = ups mod gcd(om, m s^2); returns (r, (tau^2 - r s^2)/4)
std::vector<std::pair<u64, i128>> admissible(u64 m, u64 s, i64 tau, i64 ups, u64 om) {
    std::vector<std::pair<u64, i128>> out;
    u64 mod4 = 4 * m;
    u64 ms2 = m * s * s;
    u64 gq = std::gcd(om, ms2);
    for (u64 r = 1; r < mod4; r += 2) {
        if (std::gcd(r, mod4) != 1) continue;
        i128 d = (i128)tau * tau - (i128)r * s * s;
        if (gcd_signed(d, mod4) != 4) continue;
        i128 q = d / 4;
        if (floor_mod(q - ups, gq) != 0) continue;
        out.push_back({r, q});
    }
    return out;
}

u64 upow(u64 p, int e) { return e <= 0 ? 1 : ipow(p, (unsigned)e); }

bigint phi_pp(u64 p, unsigned e) {
    if (e == 0) return 1;
    return boost::multiprecision::pow(bigint(p), e - 1) * (p - 1);
}

int kron_pow(int k, unsigned e) { return (e % 2 == 0 && k != 0) ? 1 : (e == 0 ? 1 : k); }

}  // namespace

i64 char_sum_direct(u64 f, u64 g, u64 m, u64 n, i64 tau, i64 ups, u64 om) {
    if (f == 0 || g == 0 || m == 0 || n == 0) throw error(errc::domain, "char_sum_direct needs f, g, m, n >= 1");
    if (tau % 2 == 0) throw error(errc::domain, "char_sum_direct needs odd tau");
    if (om == 0 || std::gcd((u64)floor_mod(ups, om), om) != 1) throw error(errc::domain, "needs gcd(upsilon, omega) = 1");
    // (f^2 g^2 | 2 tau) by complete multiplicativity in the top argument
    int kf = kronecker((i64)f, 2 * tau), kg = kronecker((i64)g, 2 * tau);
    int pre = kf * kf * kg * kg;
    if (pre == 0) return 0;
    auto A = admissible(m, f, tau, ups, om);
    auto B = admissible(n, g, tau, ups, om);
    u64 md = std::gcd(m * f * f, n * g * g);
    i64 s = 0;
    for (const auto& [a, qa] : A) {
        int ka = kronecker((i64)a, (i64)m);
        if (ka == 0) continue;
        for (const auto& [b, qb] : B)
            if (floor_mod(qa - qb, md) == 0) s += ka * kronecker((i64)b, (i64)n);
    }
    return pre * s;
}

i64 char_sum_local(u64 p, unsigned i, unsigned j, unsigned k, unsigned l, i64 tau, i64 ups, u64 om) {
    if (!is_prime(p)) throw error(errc::domain, "char_sum_local needs a prime");
    if (tau % 2 == 0) throw error(errc::domain, "char_sum_local needs odd tau");
    int v = (int)valuation(om, p);
    i64 rho0 = tau * tau - 4 * ups;
    if (k < l) {
        std::swap(i, j);
        std::swap(k, l);
    }
    int I = (int)i, J = (int)j, K = (int)k;
    if (k == 0 && l == 0) {
        if (i == 0 && j == 0) return 1;
        int mx = std::max(I, J);
        if (v == 0) {
            int sgn = (i + j) % 2 ? -1 : 1;
            if (p == 2) return sgn * (i64)upow(2, mx - 1);
            int kt = kronecker(tau * tau, (i64)p);
            if ((i + j) % 2) return -(i64)upow(p, mx - 1) * kt;
            return (i64)upow(p, mx - 1) * ((i64)p - 1 - kt);
        }
        return (i64)upow(p, std::max({I - v, J - v, 0})) * kron_pow(kronecker(rho0, (i64)p), i + j);
    }
    int vr = (int)valuation_signed(rho0, p);
    // vanishing condition uses min(v, 2k); the displayed max disagrees with the
    // definition on small cases
    if (valuation_signed(2 * tau, p) >= 1 || std::min(v, 2 * K) > vr) return 0;
    // rho_k = rho0 / p^{2k} is only needed (and only integral) when 2k < v
    auto kr_of = [&] { return kronecker(rho0 / (i64)upow(p, 2 * K), (i64)p); };
    if (k > l) {
        if (j > 0) return 0;
        if (i == 0) return 1;
        if (2 * K >= v) return i % 2 ? 0 : (i64)upow(p, I - 1) * ((i64)p - 1);
        return (i64)upow(p, std::max(I + 2 * K - v, 0)) * kron_pow(kr_of(), i);
    }
    if (i + j == 0) return 1;
    if (2 * K >= v) return (i + j) % 2 ? 0 : (i64)upow(p, std::max(I, J) - 1) * ((i64)p - 1);
    return (i64)upow(p, std::max({I + 2 * K - v, J + 2 * K - v, 0})) * kron_pow(kr_of(), i + j);
}

local_factor_profile local_factor(curve_kind kind, u64 p, i64 tau, i64 ups, u64 om) {
    if (!is_prime(p)) throw error(errc::domain, "local_factor needs a prime");
    if (tau % 2 == 0) throw error(errc::domain, "local_factor needs odd tau");
    if (om == 0 || std::gcd((u64)floor_mod(ups, om), om) != 1) throw error(errc::domain, "needs gcd(upsilon, omega) = 1");
    bool two = kind == curve_kind::two;
    local_factor_profile r;
    r.kind = kind;
    r.p = p;
    r.v_omega = valuation(om, p);
    r.rho0 = tau * tau - 4 * ups;
    r.v_rho0 = valuation_signed(r.rho0, p);
    r.v_2tau = valuation_signed(2 * tau, p);
    r.rho_star = r.rho0 / (i64)ipow(p, r.v_rho0);
    r.sigma = 0;
    const bigint P = p;
    const unsigned v = r.v_omega, rv = r.v_rho0;
    rational ph = rational(phi_pp(p, v));
    auto sq = [&](const rational& x) { return two ? x * x : x; };
    if (v == 0) {
        if (p == 2) {
            r.branch = "p=2";
            r.lambda = two ? rational(4, 9) : rational(2, 3);
        } else if (tau % (i64)p == 0) {
            r.branch = "p|tau";
            r.lambda = two ? rational(P * P * (P * P + 1), (P * P - 1) * (P * P - 1)) : rational(P * P, P * P - 1);
        } else {
            r.branch = "generic";
            bigint pm = P - 1, pp = P + 1;
            r.lambda = two ? rational(P * P * (P * P * P * P - 2 * P * P - 3 * P - 1), pp * pp * pp * pm * pm * pm)
                           : rational(P * (P * P - P - 1), (P * P - 1) * (P - 1));
        }
        return r;
    }
    if (v <= rv) {
        r.branch = "1<=v(om)<=v(rho0)";
        unsigned c = (v + 1) / 2;
        r.sigma = sigma_minus1(ipow(p, c - 1));
        bigint pc = boost::multiprecision::pow(P, c);
        bigint q1 = P * P - 1;
        if (two)
            r.lambda = r.sigma * r.sigma / ph +
                       rational(2 * pc * (P + 1) * (P + 1) - P * P - 3 * P - 1,
                                boost::multiprecision::pow(P, 4 * c - 4) * q1 * q1 * q1);
        else
            r.lambda = r.sigma / ph + rational(1, boost::multiprecision::pow(P, 3 * c - 3) * q1 * (P - 1));
        return r;
    }
    int ks = kronecker(r.rho_star, (i64)p);
    if (rv == 0) {
        // the two-curve value is the square of the one-curve value times phi(p^v);
        // this matches the local series, the displayed table entry does not
        r.branch = "0=v(rho0)<v(om)";
        rational base = rational(P, P - ks);
        r.lambda = sq(base) / ph;
        return r;
    }
    if (rv % 2 == 1) {
        r.branch = "0<v(rho0)<v(om),odd";
        r.sigma = sigma_minus1(ipow(p, (rv - 1) / 2));
        r.lambda = sq(r.sigma) / ph;
        return r;
    }
    r.branch = "0<v(rho0)<v(om),even";
    r.sigma = sigma_minus1(ipow(p, rv / 2));
    rational x = r.sigma + rational(1, boost::multiprecision::pow(P, rv / 2) * (ks * P - 1));
    r.lambda = sq(x) / ph;
    return r;
}

rational local_factor_from_series(curve_kind kind, u64 p, i64 tau, i64 ups, u64 om, unsigned max_exp) {
    if (!is_prime(p)) throw error(errc::domain, "local_factor_from_series needs a prime");
    if (std::log2((double)p) * (max_exp + 1) > 60) throw error(errc::range, "series exponent too large for this prime");
    bool two = kind == curve_kind::two;
    unsigned v = valuation(om, p);
    unsigned jm = two ? max_exp : 0;
    rational s = 0;
    for (unsigned i = 0; i <= max_exp; ++i)
        for (unsigned k = 0; k <= max_exp; ++k)
            for (unsigned j = 0; j <= jm; ++j)
                for (unsigned l = 0; l <= jm; ++l) {
                    i64 c = char_sum_local(p, i, j, k, l, tau, ups, om);
                    if (c == 0) continue;
                    unsigned e = std::max({v, i + 2 * k, j + 2 * l});
                    s += rational(c) / (rational(boost::multiprecision::pow(bigint(p), i + j + k + l)) * rational(phi_pp(p, e)));
                }
    return s;
}

namespace {

real to_real(const rational& q) { return real(numerator(q)) / real(denominator(q)); }

real pairwise_sum(const std::vector<real>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 0) return real(0);
    if (hi - lo == 1) return v[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

// sum_{p > P} 1/p^2 < 1/(P log P)
double prime_square_tail(u64 P) { return 1.0 / ((double)P * std::log((double)std::max<u64>(P, 2))); }

}  // namespace

euler_product_result euler_product(curve_kind kind, i64 tau, i64 ups, u64 om, u64 p_max) {
    if (p_max < 2) throw error(errc::domain, "euler_product needs P_max >= 2");
    euler_product_result r;
    r.p_max = p_max;
    // tau = 0 puts every prime in the p | tau branch, which is then the generic one
    u64 special = 2 * (tau == 0 ? 1 : (u64)(tau < 0 ? -tau : tau)) * om;
    auto primes = primes_up_to(p_max);
    std::vector<u64> used = primes;
    for (auto [q, e] : factorize(special))
        if (q > p_max) used.push_back(q);
    std::vector<real> logs(used.size());
    parallel_for(used.size(), [&](std::size_t i) {
        logs[i] = boost::multiprecision::log(to_real(local_factor(kind, used[i], tau, ups, om).lambda));
    });
    r.partial_product = boost::multiprecision::exp(pairwise_sum(logs, 0, logs.size()));

    // envelope: max p^2 |log Lambda(p)| over generic primes in (min(P_max, 1e3), 1e4]
    u64 lo = std::min<u64>(p_max, 1000);
    std::vector<u64> fit;
    for (u64 p : primes_up_to(10000))
        if (p > lo && special % p != 0) fit.push_back(p);
    std::vector<double> vals(fit.size());
    parallel_for(fit.size(), [&](std::size_t i) {
        u64 p = fit[i];
        real lg = boost::multiprecision::log(to_real(local_factor(kind, p, tau, ups, om).lambda));
        vals[i] = (double)p * (double)p * std::fabs(lg.convert_to<double>());
    });
    r.fitted_constant = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
    r.tail_estimate = 2.0 * r.fitted_constant * prime_square_tail(p_max);
    real pre = kind == curve_kind::one ? real(4) / boost::math::constants::pi<real>()
                                       : real(4) / (boost::math::constants::pi<real>() * boost::math::constants::pi<real>());
    r.constant = pre * r.partial_product;
    r.constant_tail = r.constant.convert_to<double>() * std::expm1(r.tail_estimate);
    return r;
}

double pi_half(double x) {
    if (!(x >= 2)) throw error(errc::domain, "pi_half needs x >= 2");
    if (x == 2) return 0;
    // t = u^2 turns dt / (2 sqrt(t) log t) into du / (2 log u)
    auto f = [](long double u) { return 1.0L / (2.0L * std::log(u)); };
    long double a = std::sqrt(2.0L), b = std::sqrt((long double)x);
    long double err = 0;
    long double v = boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(f, a, b, 20, 1e-14L, &err);
    return (double)v;
}

hurwitz_avg_result hurwitz_avg(const trace_sequence& seq, u64 x, const congruence_class& cc, int moment,
                               const hurwitz_table* table) {
    if (x < 5) {
        hurwitz_avg_result r;
        return r;
    }
    if (moment != 1 && moment != 2) throw error(errc::domain, "moment must be 1 or 2");
    if (seq.kind() == seq_kind::custom) throw error(errc::domain, "hurwitz_avg needs a constant or extremal sequence");
    cc.validate();
    bool extremal = seq.kind() != seq_kind::constant;
    u64 need = extremal ? 4 * isqrt(x) + 8 : 4 * x;
    hurwitz_table local;
    if (table) {
        if (table->bound() < need && !extremal) throw error(errc::cache, "Hurwitz table too small: need N >= " + std::to_string(need));
    }
    if (!table || table->bound() < need) {
        local = hurwitz_table::build(need);
        table = &local;
    }
    hurwitz_avg_result r;
    r.table_bound = table->bound();
    std::vector<u64> primes;
    for (u64 p : primes_up_to(x))
        if (p >= 5 && cc.contains(p)) primes.push_back(p);
    compensated_sum<long double> acc;
    for (u64 p : primes) {
        i64 t[2];
        seq.eval(p, t);
        u128 t2 = (u128)((i128)t[0] * t[0]);
        if (t2 >= 4 * (u128)p) continue;
        u64 n = 4 * p - (u64)t2;
        long double h = (long double)table->value12(n) / 12.0L;
        long double term = h / (long double)p;
        acc.add(moment == 1 ? term : term * term);
        ++r.primes_used;
    }
    r.value = (double)acc.value();
    return r;
}

namespace {

// sum of |local terms| over all exponents, truncated where terms are far below
// double precision
long double local_abs_series(u64 p, i64 tau, i64 ups, u64 om) {
    unsigned E = (unsigned)std::max(4.0, std::ceil(48.0 / std::log2((double)p)));
    E = std::min(E, 48u);
    unsigned v = valuation(om, p);
    long double lp = (long double)p;
    auto phi = [&](unsigned e) { return e == 0 ? 1.0L : std::pow(lp, (long double)e - 1) * (lp - 1); };
    long double s = 0;
    for (unsigned i = 0; i <= E; ++i)
        for (unsigned j = 0; i + j <= E; ++j)
            for (unsigned k = 0; i + j + k <= E; ++k)
                for (unsigned l = 0; i + j + k + l <= E; ++l) {
                    unsigned mx = std::max({i + 2 * k, j + 2 * l});
                    if (std::log2((double)p) * (std::max(i, j) + 1) > 62) continue;
                    i64 c = char_sum_local(p, i, j, k, l, tau, ups, om);
                    if (c == 0) continue;
                    s += std::fabs((long double)c) / (std::pow(lp, (long double)(i + j + k + l)) * phi(std::max(v, mx)));
                }
    return s;
}

u64 lcm_u(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

}  // namespace

k_direct_result K_direct(i64 tau, i64 ups, u64 om, u64 F, u64 G, u64 M, u64 N) {
    if (F < 1 || G < 1 || M < 1 || N < 1) throw error(errc::domain, "K_direct bounds must be >= 1");
    if (tau % 2 == 0) throw error(errc::domain, "K_direct needs odd tau");
    // exact box sum, one slot per f so the reduction order is fixed
    std::vector<rational> part(F);
    std::vector<long double> part_abs(F);
    u64 phi_om = totient(om);
    parallel_for(F, [&](std::size_t fi) {
        u64 f = fi + 1;
        rational s = 0;
        long double sa = 0;
        for (u64 g = 1; g <= G; ++g)
            for (u64 m = 1; m <= M; ++m)
                for (u64 n = 1; n <= N; ++n) {
                    i64 c = char_sum_direct(f, g, m, n, tau, ups, om);
                    if (c == 0) continue;
                    u64 L = lcm_u(m * f * f, n * g * g);
                    bigint den = bigint(f) * g * m * n * totient(L) * phi_om;
                    rational term(bigint(c) * totient(std::gcd(om, L)), den);
                    s += term;
                    sa += std::fabs(term.convert_to<long double>());
                }
        part[fi] = s;
        part_abs[fi] = sa;
    });
    rational total = 0;
    long double box_abs = 0;
    for (u64 i = 0; i < F; ++i) {
        total += part[i];
        box_abs += part_abs[i];
    }
    k_direct_result r;
    r.value = total.convert_to<double>();

    // full absolute sum as an Euler product of local absolute series
    const u64 P = 2000;
    // tau = 0 puts every prime in the p | tau branch, which is then the generic one
    u64 special = 2 * (tau == 0 ? 1 : (u64)(tau < 0 ? -tau : tau)) * om;
    std::vector<u64> ps = primes_up_to(P);
    for (auto [q, e] : factorize(special))
        if (q > P) ps.push_back(q);
    std::vector<long double> lf(ps.size());
    parallel_for(ps.size(), [&](std::size_t i) { lf[i] = local_abs_series(ps[i], tau, ups, om); });
    long double logsum = 0, fitc = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        logsum += std::log(lf[i]);
        u64 p = ps[i];
        if (p > 1000 && p <= P && special % p != 0)
            fitc = std::max(fitc, (long double)p * p * std::log(lf[i]));
    }
    logsum += 2.0L * fitc * (long double)prime_square_tail(P);
    r.abs_total = (double)std::exp(logsum);
    r.tail = std::max(0.0, r.abs_total - (double)box_abs);
    return r;
}

}  // namespace frobstat
