#include "frobstat/selftest.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "frobstat/classnum.hpp"
#include "frobstat/clt.hpp"
#include "frobstat/constants.hpp"
#include "frobstat/counting.hpp"
#include "frobstat/families.hpp"
#include "frobstat/ffcurve.hpp"

namespace frobstat {

namespace {

// p + 1 - #E(F_p) by counting affine points directly
i64 brute_trace(u64 a, u64 b, u64 p) {
    std::vector<u64> sq(p, 0);
    for (u64 y = 0; y < p; ++y) sq[y * y % p]++;
    u64 n = 1;
    for (u64 x = 0; x < p; ++x) n += sq[(x * x % p * x + a * x + b) % p];
    return (i64)(p + 1) - (i64)n;
}

// 12 H(n) from all reduced forms of discriminant -n, primitive or not
u64 brute_h12(u64 n) {
    if (n == 0 || n % 4 == 1 || n % 4 == 2) return 0;
    u64 s = 0;
    for (i64 a = 1; 3 * a * a <= (i64)n; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 m = (i64)n + b * b;
            if (m % (4 * a)) continue;
            i64 c = m / (4 * a);
            if (c < a || (c == a && b < 0)) continue;
            if (a == b && b == c) s += 4;
            else if (b == 0 && a == c) s += 6;
            else s += 12;
        }
    return s;
}

struct checker {
    selftest_report& rep;
    void operator()(bool ok, const std::string& what) {
        ++rep.checks;
        if (!ok) rep.failures.push_back(what);
    }
};

void check_ffcurve(checker& ck) {
    for (u64 p : {5, 7, 11, 13, 29, 53})
        for (u64 a = 0; a < p; a += 2)
            for (u64 b = 0; b < p; b += 3) {
                if (is_singular(a, b, p)) continue;
                ck(curve_trace((i64)a, (i64)b, p) == brute_trace(a, b, p),
                   "trace mismatch at p=" + std::to_string(p) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
            }
    for (u64 p : {3, 5, 7, 97})
        for (u64 x = 1; x < p; ++x) {
            u64 e = powmod(x, (p - 1) / 2, p);
            ck(kronecker((i64)x, (i64)p) == (e == 1 ? 1 : -1), "kronecker disagrees with Euler's criterion");
        }
    ck(cm_j_invariants().size() == 13, "expected 13 CM j-invariants");
}

void check_classnum(checker& ck) {
    ck(class_number(-23).h == 3, "h(-23) should be 3");
    ck(class_number(-3).w == 3 && class_number(-4).w == 2, "unit counts at -3, -4");
    auto tab = hurwitz_table::build(2000);
    for (u64 n = 0; n <= 2000; ++n) {
        u64 v = brute_h12(n);
        if (hurwitz12(n) != v || tab.value12(n) != v) {
            ck(false, "12H(" + std::to_string(n) + ") mismatch");
            break;
        }
    }
    ++ck.rep.checks;
    for (u64 p : primes_up_to(60)) {
        if (p < 5) continue;
        i64 m = (i64)isqrt(4 * p - 1);
        for (i64 t = -m; t <= m; ++t) {
            if (t == 0 || t % (i64)p == 0) continue;
            ck(deuring_check(p, t).holds, "Deuring identity fails at p=" + std::to_string(p) + " tau=" + std::to_string(t));
        }
    }
}

void check_families(checker& ck) {
    poly q = parse_poly("Z^5+5Z^3+5Z");
    for (u64 p : {7, 11, 13, 17, 19, 23}) {
        std::set<u64> img;
        for (u64 w = 0; w < p; ++w) img.insert(q.eval_mod(w, p));
        ck(is_permutation_poly(q, p) == (img.size() == p), "permutation test mismatch at p=" + std::to_string(p));
    }
    auto S = argument_set::farey(12);
    for (u64 p : {5, 7, 13}) {
        auto prof = make_residue_profile(S, p);
        u64 tot = prof.dropped;
        for (u64 c : prof.counts) tot += c;
        ck(tot == S.cardinality(), "residue profile does not cover the Farey set");
    }
    auto fam = curve_family::parse("f=-3Z^2+1;g=2Z^3-Z");
    for (u64 p : {5, 7, 11})
        for (i64 u = -3; u <= 3; ++u)
            for (i64 v = 1; v <= 3; ++v) {
                if (v % (i64)p == 0 || gcd((u64)std::abs(u), (u64)v) != 1) continue;
                auto [a, b] = fam.model_mod(u, v, p);
                u64 w = mulmod(mod_signed(u, p), invmod(mod_signed(v, p), p), p);
                u64 a0 = fam.f().eval_mod(w, p), b0 = fam.g().eval_mod(w, p);
                bool s1 = is_singular(a, b, p), s0 = is_singular(a0, b0, p);
                ck(s1 == s0 && (s1 || brute_trace(a, b, p) == brute_trace(a0, b0, p)),
                   "integral model disagrees with the specialization");
            }
}

void check_counting(checker& ck) {
    std::mt19937_64 rng(7);
    const char* fams[] = {"f=Z;g=Z^2+1", "f=-3Z^2+1;g=2Z^3-Z", "f=0;g=Z", "f=Z^3-2;g=5"};
    for (int inst = 0; inst < 8; ++inst) {
        auto fam = curve_family::parse(fams[inst % 4]);
        std::vector<argset_entry> es;
        for (int i = 0; i < 12; ++i) {
            i64 u = (i64)(rng() % 21) - 10, v = (i64)(rng() % 5) + 1;
            auto fr = fraction::make(u, v);
            if (fam.disc_at(fr.value()) == 0) continue;
            es.push_back({fr, 1});
        }
        auto S = argument_set::from_entries(es);
        i64 tau = (i64)(rng() % 5) - 2;
        auto seq = trace_sequence::constant(tau);
        u64 x = 200;
        auto rep = avg_single(S, fam, seq, {x}).front();
        u64 brute = 0;
        for (const auto& e : S.entries())
            for (u64 p : primes_up_to(x)) {
                if (p < 5) continue;
                u64 a, b;
                if (e.value.den % (i64)p == 0) {
                    std::tie(a, b) = fam.model_mod(e.value.num, e.value.den, p);
                } else {
                    u64 w = mulmod(mod_signed(e.value.num, p), invmod(mod_signed(e.value.den, p), p), p);
                    a = fam.f().eval_mod(w, p);
                    b = fam.g().eval_mod(w, p);
                }
                if (!is_singular(a, b, p) && brute_trace(a, b, p) == tau) brute += e.mult;
            }
        ck(rep.total == brute, "avg_single disagrees with the direct loop (instance " + std::to_string(inst) + ")");
    }
}

void check_constants(checker& ck) {
    for (u64 p : {2, 3, 5})
        for (i64 tau : {1, 3})
            for (auto [ups, om] : std::vector<std::pair<i64, u64>>{{1, 1}, {1, 4}, {2, 5}})
                for (unsigned i = 0; i <= 1; ++i)
                    for (unsigned j = 0; j <= 1; ++j)
                        for (unsigned k = 0; k <= 1; ++k)
                            for (unsigned l = 0; l <= 1; ++l) {
                                u64 f = ipow(p, k), g = ipow(p, l), m = ipow(p, i), n = ipow(p, j);
                                ck(char_sum_local(p, i, j, k, l, tau, ups, om) ==
                                       char_sum_direct(f, g, m, n, tau, ups, om),
                                   "character sum closed form mismatch at p=" + std::to_string(p));
                            }
    ck(local_factor(curve_kind::two, 2, 1, 1, 1).lambda == rational(4, 9), "two-curve Lambda(2) should be 4/9");
    ck(local_factor(curve_kind::one, 2, 1, 1, 1).lambda == rational(2, 3), "one-curve Lambda(2) should be 2/3");
    ck(local_factor(curve_kind::one, 3, 3, 1, 1).lambda == rational(9, 8), "one-curve p | tau branch");
    ck(std::fabs(pi_half(1e6) - 0.5 * (std::expint(std::log(1e3)) - std::expint(std::log(std::sqrt(2.0))))) < 1e-6,
       "pi_half disagrees with the exponential integral");
}

void check_clt(checker& ck) {
    for (unsigned m = 0; m <= 10; ++m)
        for (unsigned j = 0; j <= m; ++j)
            ck(std::fabs((double)h_coeff(m, j) - h_coeff_quadrature(m, j)) < 1e-8, "h_coeff disagrees with quadrature");
    ck(gaussian_moment(2) == 1 && gaussian_moment(4) == 3 && gaussian_moment(3) == 0, "gaussian moments");
    pair_family_spec spec;
    spec.A = 3;
    spec.B = 3;
    auto direct = moments(spec, 60, 2);
    auto fast = moments_collapsed(spec, 60, 2);
    for (int r = 0; r < 2; ++r)
        ck(std::fabs(direct.V[r] - fast.V[r]) <= 1e-12 * std::max(1.0, std::fabs(direct.V[r])),
           "collapsed moments disagree with the pair loop");
    ck(S_avg(5) == 0.0 && std::fabs(S_avg(1) - 1) < 1e-15, "S_avg at 1 and at an odd prime power");
}

}  // namespace

selftest_report selftest(const std::string& module) {
    selftest_report rep;
    rep.module = module;
    checker ck{rep};
    if (module == "ffcurve") check_ffcurve(ck);
    else if (module == "classnum") check_classnum(ck);
    else if (module == "families") check_families(ck);
    else if (module == "counting") check_counting(ck);
    else if (module == "constants") check_constants(ck);
    else if (module == "clt") check_clt(ck);
    else throw error(errc::domain, "unknown selftest module " + module);
    return rep;
}

std::string selftest_module_for(const std::string& command) {
    static const std::map<std::string, std::string> m = {
        {"trace", "ffcurve"},        {"hurwitz", "classnum"},       {"deuring-check", "classnum"},
        {"avg-lt", "counting"},      {"avg-lt-pair", "counting"},   {"exp-count", "counting"},
        {"perm-check", "families"},  {"char-sum", "constants"},     {"local-factor", "constants"},
        {"constant", "constants"},   {"hurwitz-avg", "constants"},  {"pi-half", "constants"},
        {"clt-moments", "clt"},      {"clt-eigen", "clt"},
    };
    auto it = m.find(command);
    if (it == m.end()) throw error(errc::domain, "no selftest for command " + command);
    return it->second;
}

}  // namespace frobstat
